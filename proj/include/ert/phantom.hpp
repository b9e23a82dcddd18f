#ifndef ERT_PHANTOM_HPP
#define ERT_PHANTOM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ert/error.hpp"
#include "ert/geometry.hpp"
#include "ert/parallel.hpp"
#include "ert/vec2.hpp"

namespace ert {

// Minimum clearance between a shape's support and the boundary |x| = b.
inline constexpr double support_margin = 1e-6;

struct Disk {
  Vec2 center;
  double radius = 0.0;
  double amplitude = 1.0;
};

// Ellipse with semi-axes along its own frame, rotated by `angle`. The default
// angle 0 is axis-aligned.
struct EllipseShape {
  Vec2 center;
  double semi_x = 0.0;
  double semi_y = 0.0;
  double angle = 0.0;
  double amplitude = 1.0;
};

struct Rectangle {
  Vec2 center;
  double half_width = 0.0;
  double half_height = 0.0;
  double angle = 0.0;
  double amplitude = 1.0;
};

// amplitude * exp(-|x - center|^2 / (2 sigma^2)); its support extent is taken
// as 4 sigma.
struct GaussianBump {
  Vec2 center;
  double sigma = 0.0;
  double amplitude = 1.0;
};

using Shape = std::variant<Disk, EllipseShape, Rectangle, GaussianBump>;

inline std::string shape_kind(const Shape& s) {
  struct {
    std::string operator()(const Disk&) const { return "disk"; }
    std::string operator()(const EllipseShape&) const { return "ellipse"; }
    std::string operator()(const Rectangle&) const { return "rectangle"; }
    std::string operator()(const GaussianBump&) const { return "gaussian"; }
  } v;
  return std::visit(v, s);
}

namespace detail {

inline Vec2 to_local(const Vec2& center, double angle, const Vec2& x) {
  return rotate(-angle, x - center);
}

}  // namespace detail

// Boundary function of an indicator shape: <= 0 on the closed shape, > 0
// outside, continuous across the boundary. Empty for smooth shapes.
inline std::optional<double> boundary_function(const Shape& shape, const Vec2& x) {
  struct {
    Vec2 x;
    std::optional<double> operator()(const Disk& d) const {
      return norm2(x - d.center) - d.radius * d.radius;
    }
    std::optional<double> operator()(const EllipseShape& e) const {
      const Vec2 u = detail::to_local(e.center, e.angle, x);
      return (u.x / e.semi_x) * (u.x / e.semi_x) + (u.y / e.semi_y) * (u.y / e.semi_y) - 1.0;
    }
    std::optional<double> operator()(const Rectangle& r) const {
      const Vec2 u = detail::to_local(r.center, r.angle, x);
      return std::max(std::abs(u.x) - r.half_width, std::abs(u.y) - r.half_height);
    }
    std::optional<double> operator()(const GaussianBump&) const { return std::nullopt; }
  } v{x};
  return std::visit(v, shape);
}

inline bool has_jump(const Shape& shape) { return !std::holds_alternative<GaussianBump>(shape); }

inline double shape_value(const Shape& shape, const Vec2& x) {
  if (const auto* gb = std::get_if<GaussianBump>(&shape)) {
    return gb->amplitude * std::exp(-norm2(x - gb->center) / (2.0 * gb->sigma * gb->sigma));
  }
  const double amp = std::visit([](const auto& s) { return s.amplitude; }, shape);
  return *boundary_function(shape, x) <= 0.0 ? amp : 0.0;
}

// Largest |x| over the shape's support.
inline double support_radius(const Shape& shape) {
  struct {
    double operator()(const Disk& d) const { return norm(d.center) + d.radius; }
    double operator()(const GaussianBump& g) const { return norm(g.center) + 4.0 * g.sigma; }
    double operator()(const Rectangle& r) const {
      double m = 0.0;
      for (double sx : {-1.0, 1.0}) {
        for (double sy : {-1.0, 1.0}) {
          m = std::max(m, norm(r.center + rotate(r.angle, Vec2{sx * r.half_width, sy * r.half_height})));
        }
      }
      return m;
    }
    double operator()(const EllipseShape& e) const {
      // |x(t)|^2 on the boundary is a trigonometric polynomial; dense scan then
      // golden-section refinement around the best sample.
      auto r2 = [&](double t) {
        return norm2(e.center + rotate(e.angle, Vec2{e.semi_x * std::cos(t), e.semi_y * std::sin(t)}));
      };
      constexpr int samples = 2048;
      int best = 0;
      for (int k = 1; k < samples; ++k) {
        if (r2(two_pi * k / samples) > r2(two_pi * best / samples)) best = k;
      }
      double lo = two_pi * (best - 1) / samples;
      double hi = two_pi * (best + 1) / samples;
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      for (int it = 0; it < 100; ++it) {
        const double m1 = hi - gr * (hi - lo);
        const double m2 = lo + gr * (hi - lo);
        if (r2(m1) > r2(m2)) {
          hi = m2;
        } else {
          lo = m1;
        }
      }
      return std::sqrt(r2(0.5 * (lo + hi)));
    }
  } v;
  return std::visit(v, shape);
}

inline Shape rotated(const Shape& shape, double theta) {
  return std::visit(
      [theta](auto s) -> Shape {
        s.center = rotate(theta, s.center);
        if constexpr (requires { s.angle; }) s.angle += theta;
        return s;
      },
      shape);
}

// Reflectivity function as a sum of analytic shapes.
struct Phantom {
  std::vector<Shape> shapes;

  double evaluate(const Vec2& x) const {
    double sum = 0.0;
    for (const auto& s : shapes) sum += shape_value(s, x);
    return sum;
  }

  bool has_jumps() const {
    return std::any_of(shapes.begin(), shapes.end(), [](const Shape& s) { return has_jump(s); });
  }
};

inline double evaluate(const Phantom& p, const Vec2& x) { return p.evaluate(x); }

inline Phantom rotated(const Phantom& p, double theta) {
  Phantom out;
  out.shapes.reserve(p.shapes.size());
  for (const auto& s : p.shapes) out.shapes.push_back(rotated(s, theta));
  return out;
}

inline Phantom operator+(Phantom l, const Phantom& r) {
  l.shapes.insert(l.shapes.end(), r.shapes.begin(), r.shapes.end());
  return l;
}

struct SupportEntry {
  std::size_t index = 0;
  std::string kind;
  double max_radius = 0.0;
  double margin = 0.0;  // b - max_radius
  bool pass = false;
};

struct SupportReport {
  double b = 0.0;
  std::vector<SupportEntry> entries;

  bool pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const SupportEntry& e) { return e.pass; });
  }
  // Index of the first failing shape, if any.
  std::optional<std::size_t> first_failure() const {
    for (const auto& e : entries) {
      if (!e.pass) return e.index;
    }
    return std::nullopt;
  }
};

inline SupportReport validate_support(const Phantom& p, double radius) {
  SupportReport report;
  report.b = radius;
  for (std::size_t i = 0; i < p.shapes.size(); ++i) {
    SupportEntry e;
    e.index = i;
    e.kind = shape_kind(p.shapes[i]);
    e.max_radius = support_radius(p.shapes[i]);
    e.margin = radius - e.max_radius;
    e.pass = e.margin >= support_margin;
    report.entries.push_back(e);
  }
  return report;
}

inline SupportReport validate_support(const Phantom& p, const ScanGeometry& g) {
  return validate_support(p, g.b());
}

inline void require_support(const Phantom& p, double radius) {
  const auto report = validate_support(p, radius);
  if (auto bad = report.first_failure()) {
    const auto& e = report.entries[*bad];
    throw SupportViolation("shape " + std::to_string(*bad) + " (" + e.kind + ") reaches |x| = " +
                           std::to_string(e.max_radius) + ", outside the support disc of radius " +
                           std::to_string(radius));
  }
}

// n x n samples on [-extent, extent]^2, pixel centers at spacing 2 extent / n.
// Row i runs along y, column j along x; storage is row-major.
class ImageGrid {
 public:
  ImageGrid() = default;
  ImageGrid(int n, double extent) : n_(n), extent_(extent), values_(static_cast<std::size_t>(n) * n, 0.0) {
    if (n < 1) throw ConfigError("image grid needs at least one pixel per side");
    if (!(extent > 0.0)) throw ConfigError("image grid extent must be positive");
  }

  int n() const { return n_; }
  double extent() const { return extent_; }
  double spacing() const { return 2.0 * extent_ / n_; }
  double pixel_area() const { return spacing() * spacing(); }
  std::size_t size() const { return values_.size(); }

  double coord(int k) const { return -extent_ + (k + 0.5) * spacing(); }
  Vec2 center(int i, int j) const { return {coord(j), coord(i)}; }

  // Pixel containing x (row, column); may be out of range.
  std::pair<int, int> pixel_of(const Vec2& x) const {
    return {static_cast<int>(std::floor((x.y + extent_) / spacing())),
            static_cast<int>(std::floor((x.x + extent_) / spacing()))};
  }

  double& at(int i, int j) { return values_[static_cast<std::size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return values_[static_cast<std::size_t>(i) * n_ + j]; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  // Bilinear interpolation between pixel centers, clamped at the border.
  double sample(const Vec2& x) const {
    const double h = spacing();
    const double fx = std::clamp((x.x + extent_) / h - 0.5, 0.0, n_ - 1.0);
    const double fy = std::clamp((x.y + extent_) / h - 0.5, 0.0, n_ - 1.0);
    const int j0 = std::min(static_cast<int>(fx), n_ - 2 < 0 ? 0 : n_ - 2);
    const int i0 = std::min(static_cast<int>(fy), n_ - 2 < 0 ? 0 : n_ - 2);
    const int j1 = std::min(j0 + 1, n_ - 1);
    const int i1 = std::min(i0 + 1, n_ - 1);
    const double tx = fx - j0;
    const double ty = fy - i0;
    return (1 - ty) * ((1 - tx) * at(i0, j0) + tx * at(i0, j1)) + ty * ((1 - tx) * at(i1, j0) + tx * at(i1, j1));
  }

 private:
  int n_ = 0;
  double extent_ = 1.0;
  std::vector<double> values_;
};

struct RasterSpec {
  int n = 128;
  double extent = 1.0;
  bool supersample = false;
  int workers = 1;
};

inline RasterSpec raster_spec(const ScanGeometry& g, int n, bool supersample = false) {
  return {n, g.b(), supersample, 1};
}

namespace detail {

// 4 x 4 sub-pixel offsets in units of the pixel spacing.
inline double subpixel_offset(int k) { return (k + 0.5) / 4.0 - 0.5; }

inline bool on_boundary(const Phantom& p, const ImageGrid& grid, int i, int j) {
  const Vec2 c = grid.center(i, j);
  const double h = grid.spacing();
  for (const auto& shape : p.shapes) {
    if (!has_jump(shape)) continue;
    const bool inside = *boundary_function(shape, c) <= 0.0;
    for (int u = 0; u < 4; ++u) {
      for (int v = 0; v < 4; ++v) {
        const Vec2 x = c + Vec2{subpixel_offset(v) * h, subpixel_offset(u) * h};
        if ((*boundary_function(shape, x) <= 0.0) != inside) return true;
      }
    }
  }
  return false;
}

}  // namespace detail

// Samples the phantom at pixel centers. With supersampling, pixels whose 4x4
// sub-samples straddle an indicator boundary take the sub-sample mean.
inline ImageGrid rasterize(const Phantom& p, const RasterSpec& spec) {
  require_support(p, spec.extent);
  ImageGrid grid(spec.n, spec.extent);
  parallel_for(static_cast<std::size_t>(spec.n), spec.workers, [&](std::size_t row) {
    const int i = static_cast<int>(row);
    const double h = grid.spacing();
    for (int j = 0; j < spec.n; ++j) {
      const Vec2 c = grid.center(i, j);
      if (spec.supersample && detail::on_boundary(p, grid, i, j)) {
        double sum = 0.0;
        for (int u = 0; u < 4; ++u) {
          for (int v = 0; v < 4; ++v) {
            sum += p.evaluate(c + Vec2{detail::subpixel_offset(v) * h, detail::subpixel_offset(u) * h});
          }
        }
        grid.at(i, j) = sum / 16.0;
      } else {
        grid.at(i, j) = p.evaluate(c);
      }
    }
  });
  return grid;
}

// Fixed phantom set shared by tests and the CLI, scaled to the support disc.
namespace phantoms {

inline Phantom centered_disk(const ScanGeometry& g) { return {{Disk{{0.0, 0.0}, 0.5 * g.b(), 1.0}}}; }

inline Phantom offset_disk(const ScanGeometry& g) {
  return {{Disk{{0.25 * g.b(), 0.15 * g.b()}, 0.4 * g.b(), 1.0}}};
}

inline Phantom two_disk(const ScanGeometry& g) {
  const double b = g.b();
  return {{Disk{{-0.35 * b, 0.0}, 0.25 * b, 1.0}, Disk{{0.35 * b, 0.1 * b}, 0.2 * b, 0.5}}};
}

inline Phantom gaussian(const ScanGeometry& g) { return {{GaussianBump{{0.0, 0.0}, g.b() / 8.0, 1.0}}}; }

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"centered_disk", "offset_disk", "two_disk", "gaussian"};
  return n;
}

inline Phantom by_name(const std::string& name, const ScanGeometry& g) {
  if (name == "centered_disk") return centered_disk(g);
  if (name == "offset_disk") return offset_disk(g);
  if (name == "two_disk") return two_disk(g);
  if (name == "gaussian") return gaussian(g);
  throw ConfigError("unknown canonical phantom '" + name + "'");
}

}  // namespace phantoms

}  // namespace ert

#endif  // ERT_PHANTOM_HPP
