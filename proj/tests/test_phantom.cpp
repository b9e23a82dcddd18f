#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ert/phantom.hpp"
#include "ert/phantom_io.hpp"

namespace ert {
namespace {

TEST(Evaluate, EmptyPhantomIsZero) {
  const Phantom p;
  EXPECT_EQ(p.evaluate({0.1, 0.2}), 0.0);
  EXPECT_EQ(evaluate(p, {-3.0, 7.0}), 0.0);
}

TEST(Evaluate, DiskInteriorAndAdditivity) {
  const Phantom one{{Disk{{0.1, 0.0}, 0.3, 1.0}}};
  EXPECT_EQ(one.evaluate({0.1, 0.29}), 1.0);
  EXPECT_EQ(one.evaluate({0.1, 0.31}), 0.0);
  // Closed set: boundary points count as inside.
  const Phantom dyadic{{Disk{{0.0, 0.0}, 0.25, 1.0}}};
  EXPECT_EQ(dyadic.evaluate({0.25, 0.0}), 1.0);
  const Phantom two{{Disk{{0.0, 0.0}, 0.3, 1.0}, Disk{{0.2, 0.0}, 0.3, 1.0}}};
  EXPECT_EQ(two.evaluate({0.1, 0.0}), 2.0);
}

TEST(Evaluate, ShapesOfEveryKind) {
  const Phantom p{{EllipseShape{{0.0, 0.0}, 0.3, 0.1, 0.0, 2.0}, Rectangle{{0.5, 0.5}, 0.1, 0.05, pi / 2, 3.0},
                   GaussianBump{{0.0, 0.0}, 0.1, 1.5}}};
  EXPECT_NEAR(p.evaluate({0.0, 0.0}), 2.0 + 1.5, 1e-15);
  EXPECT_NEAR(p.evaluate({0.25, 0.0}), 2.0 + 1.5 * std::exp(-0.0625 / 0.02), 1e-15);
  EXPECT_NEAR(p.evaluate({0.0, 0.15}), 1.5 * std::exp(-0.0225 / 0.02), 1e-15);
  // Rotated a quarter turn, the rectangle's long side runs along y.
  EXPECT_NEAR(p.evaluate({0.5, 0.59}), 3.0 + 1.5 * std::exp(-(0.25 + 0.59 * 0.59) / 0.02), 1e-15);
  EXPECT_NEAR(p.evaluate({0.59, 0.5}), 1.5 * std::exp(-(0.59 * 0.59 + 0.25) / 0.02), 1e-15);
}

TEST(Evaluate, RotationCovariance) {
  const Phantom p{{Disk{{0.2, 0.1}, 0.2, 1.0}, GaussianBump{{-0.1, 0.2}, 0.05, 0.7},
                   Rectangle{{0.0, -0.3}, 0.15, 0.05, 0.3, 1.3}, EllipseShape{{-0.2, -0.1}, 0.1, 0.2, 0.0, 0.4}}};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.6, 0.6), th(0.0, two_pi);
  for (int trial = 0; trial < 10; ++trial) {
    const double theta = th(rng);
    const Phantom q = rotated(p, theta);
    for (int k = 0; k < 500; ++k) {
      const Vec2 x{u(rng), u(rng)};
      bool near_edge = false;
      for (const auto& s : p.shapes) {
        if (auto f = boundary_function(s, x)) near_edge = near_edge || std::abs(*f) < 1e-9;
      }
      if (near_edge) continue;
      EXPECT_NEAR(q.evaluate(rotate(theta, x)), p.evaluate(x), 1e-12);
    }
  }
}

TEST(Support, ReportValues) {
  const ScanGeometry g(0.7);
  const double b = g.b();
  const auto centered = validate_support(Phantom{{Disk{{0.0, 0.0}, b / 2, 1.0}}}, g);
  EXPECT_TRUE(centered.pass());
  EXPECT_NEAR(centered.entries[0].max_radius, b / 2, 1e-15);
  const auto edge = validate_support(Phantom{{Disk{{b, 0.0}, 0.01, 1.0}}}, g);
  EXPECT_FALSE(edge.pass());
  EXPECT_EQ(edge.first_failure(), 0u);
  const auto gauss = validate_support(Phantom{{GaussianBump{{0.0, 0.0}, b / 8, 1.0}}}, g);
  EXPECT_TRUE(gauss.pass());
  EXPECT_NEAR(gauss.entries[0].margin, b / 2, 1e-15);
}

TEST(Support, RotatedShapesExtremes) {
  const ScanGeometry g(0.3);
  const Rectangle r{{0.1, 0.0}, 0.2, 0.1, pi / 4, 1.0};
  double best = 0.0;
  const EllipseShape e{{0.1, -0.2}, 0.3, 0.1, 0.6, 1.0};
  double best_e = 0.0;
  for (int k = 0; k < 200000; ++k) {
    const double t = two_pi * k / 200000;
    best_e = std::max(best_e, norm(e.center + rotate(e.angle, Vec2{0.3 * std::cos(t), 0.1 * std::sin(t)})));
  }
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) best = std::max(best, norm(r.center + rotate(r.angle, Vec2{0.2 * sx, 0.1 * sy})));
  }
  EXPECT_NEAR(support_radius(r), best, 1e-15);
  EXPECT_NEAR(support_radius(e), best_e, 1e-9);
  const auto report = validate_support(Phantom{{r, e}}, g);
  EXPECT_TRUE(report.pass());
}

TEST(Rasterize, ZeroPhantomAndSupportViolation) {
  const ScanGeometry g(0.5);
  const ImageGrid zero = rasterize(Phantom{}, raster_spec(g, 32));
  for (double v : zero.values()) EXPECT_EQ(v, 0.0);
  const Phantom bad{{Disk{{0.0, 0.0}, 0.1, 1.0}, Disk{{g.b(), 0.0}, 0.01, 1.0}}};
  try {
    rasterize(bad, raster_spec(g, 16));
    FAIL() << "expected a support violation";
  } catch (const SupportViolation& e) {
    EXPECT_NE(std::string(e.what()).find("shape 1"), std::string::npos);
  }
}

TEST(Rasterize, DiskAreaWithinTwoPercent) {
  const ScanGeometry g(0.6);
  const double r = 0.5 * g.b();
  const ImageGrid img = rasterize(Phantom{{Disk{{0.05, -0.02}, r, 1.0}}}, raster_spec(g, 256));
  double area = 0.0;
  for (double v : img.values()) area += v;
  area *= img.pixel_area();
  EXPECT_NEAR(area, pi * r * r, 0.02 * pi * r * r);
}

TEST(Rasterize, SupersamplingOnlyChangesBoundaryPixels) {
  const ScanGeometry g(0.6);
  const Phantom p{{Disk{{0.05, -0.02}, 0.3, 1.0}, GaussianBump{{0.0, 0.1}, 0.05, 0.5}}};
  const ImageGrid plain = rasterize(p, raster_spec(g, 64, false));
  const ImageGrid fine = rasterize(p, raster_spec(g, 64, true));
  const Disk& d = std::get<Disk>(p.shapes[0]);
  const double half_diag = std::sqrt(0.5) * plain.spacing();
  int changed = 0;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      const double dist = std::abs(distance(plain.center(i, j), d.center) - d.radius);
      if (plain.at(i, j) != fine.at(i, j)) {
        ++changed;
        EXPECT_LE(dist, half_diag) << i << "," << j;
      }
    }
  }
  EXPECT_GT(changed, 0);
}

TEST(Rasterize, DoublingResolutionConvergesInL1) {
  const ScanGeometry g(0.6);
  const Phantom p = phantoms::offset_disk(g);
  auto l1_gap = [&](int n) {
    const ImageGrid coarse = rasterize(p, raster_spec(g, n));
    const ImageGrid fine = rasterize(p, raster_spec(g, 2 * n));
    double gap = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double avg = 0.25 * (fine.at(2 * i, 2 * j) + fine.at(2 * i + 1, 2 * j) + fine.at(2 * i, 2 * j + 1) +
                                   fine.at(2 * i + 1, 2 * j + 1));
        gap += std::abs(avg - coarse.at(i, j));
      }
    }
    return gap * coarse.pixel_area();
  };
  const double e64 = l1_gap(64);
  const double e128 = l1_gap(128);
  const double e256 = l1_gap(256);
  // First order: each doubling roughly halves the gap.
  EXPECT_LT(e128, 0.75 * e64);
  EXPECT_LT(e256, 0.75 * e128);
}

TEST(ImageGrid, PixelIndexRoundTrip) {
  const ImageGrid img(37, 0.8);
  for (int i = 0; i < 37; ++i) {
    for (int j = 0; j < 37; ++j) {
      const auto [r, c] = img.pixel_of(img.center(i, j));
      EXPECT_EQ(r, i);
      EXPECT_EQ(c, j);
    }
  }
}

TEST(Canonical, AllInsideSupport) {
  for (double alpha : {0.3, 0.6, 0.9, 1.2, 1.5}) {
    const ScanGeometry g(alpha);
    for (const auto& name : phantoms::names()) EXPECT_TRUE(validate_support(phantoms::by_name(name, g), g).pass());
  }
  EXPECT_THROW(phantoms::by_name("nope", ScanGeometry(0.5)), ConfigError);
}

TEST(PhantomJson, RoundTripPreservesEvaluation) {
  const Phantom p{{Disk{{0.1, 0.0}, 0.3, 1.0}, EllipseShape{{0.0, 0.1}, 0.2, 0.1, 0.4, 2.0},
                   Rectangle{{-0.1, -0.1}, 0.1, 0.05, 0.2, 0.5}, GaussianBump{{0.05, 0.05}, 0.04, 1.1}}};
  const Phantom q = phantom_from_json(to_json(p));
  ASSERT_EQ(q.shapes.size(), p.shapes.size());
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 1000; ++k) {
    const Vec2 x{u(rng), u(rng)};
    EXPECT_EQ(q.evaluate(x), p.evaluate(x));
  }
}

TEST(PhantomJson, MalformedInputs) {
  EXPECT_THROW(phantom_from_json(nlohmann::json::parse("{}")), ParseError);
  EXPECT_THROW(phantom_from_json(nlohmann::json::parse(R"({"shapes":[{"kind":"star","center":[0,0]}]})")),
               ParseError);
  EXPECT_THROW(phantom_from_json(nlohmann::json::parse(R"({"shapes":[{"kind":"disk","center":[0]}]})")),
               ParseError);
  EXPECT_THROW(phantom_from_json(nlohmann::json::parse(R"({"shapes":[{"kind":"disk","center":[0,0]}]})")),
               ParseError);
  EXPECT_THROW(read_phantom("/nonexistent/phantom.json"), ConfigError);
}

}  // namespace
}  // namespace ert
