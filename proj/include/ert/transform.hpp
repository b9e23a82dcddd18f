#ifndef ERT_TRANSFORM_HPP
#define ERT_TRANSFORM_HPP

// Elliptical Radon transform R, its L2 adjoint R*, the normal operator R*R and
// the local reconstruction R* D R with D = -d^2/dL^2.
//
// Measures: Lebesgue ds dL on the parameter space and dx on the support disc.
// By the coarea formula the adjoint then reads
//   R*g(x) = int_0^{2pi} g(s, level(x, s)) |grad_x level(x, s)| ds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <utility>
#include <vector>

#include "ert/error.hpp"
#include "ert/geometry.hpp"
#include "ert/parallel.hpp"
#include "ert/phantom.hpp"
#include "ert/quadrature.hpp"
#include "ert/vec2.hpp"

namespace ert {

struct QuadratureConfig {
  int panels = 16;
  int nodes = 8;
};

struct SinogramSpec {
  int n_s = 180;
  int n_L = 200;
  // Margin at both ends of the admissible diameter range, as a fraction of
  // max_diameter - 2a.
  double eps_fraction = 0.02;
  QuadratureConfig quadrature;
  int workers = 1;
};

// Samples on the periodic s-grid s_i = 2 pi i / n_s and the uniform L-grid
// L_j = L_min + j (L_max - L_min) / (n_L - 1); values are row-major, s outer.
class Sinogram {
 public:
  Sinogram(const ScanGeometry& g, int n_s, int n_L, double L_min, double L_max)
      : geometry_(g), n_s_(n_s), n_L_(n_L), L_min_(L_min), L_max_(L_max),
        values_(static_cast<std::size_t>(std::max(n_s, 0)) * std::max(n_L, 0), 0.0) {
    if (n_s < 1 || n_L < 2) throw ConfigError("sinogram needs n_s >= 1 and n_L >= 2");
    if (!(L_min > g.focal_distance() && L_max < g.max_diameter() && L_min < L_max)) {
      std::ostringstream os;
      os.precision(17);
      os << "L-grid [" << L_min << ", " << L_max << "] must lie strictly inside (" << g.focal_distance()
         << ", " << g.max_diameter() << ")";
      throw DomainError(os.str());
    }
  }

  const ScanGeometry& geometry() const { return geometry_; }
  int n_s() const { return n_s_; }
  int n_L() const { return n_L_; }
  double L_min() const { return L_min_; }
  double L_max() const { return L_max_; }
  double ds() const { return two_pi / n_s_; }
  double dL() const { return (L_max_ - L_min_) / (n_L_ - 1); }
  double s(int i) const { return two_pi * i / n_s_; }
  double L(int j) const { return j + 1 == n_L_ ? L_max_ : L_min_ + j * dL(); }

  double& at(int i, int j) { return values_[static_cast<std::size_t>(i) * n_L_ + j]; }
  double at(int i, int j) const { return values_[static_cast<std::size_t>(i) * n_L_ + j]; }
  // s-index taken modulo n_s.
  double at_wrapped(int i, int j) const { return at(((i % n_s_) + n_s_) % n_s_, j); }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  // Linear interpolation in L at s-index i; zero outside [L_min, L_max].
  double interpolate(int i, double L) const {
    if (!(L >= L_min_ && L <= L_max_)) return 0.0;
    const double u = (L - L_min_) / dL();
    const int j = std::min(static_cast<int>(u), n_L_ - 2);
    const double t = u - j;
    return (1.0 - t) * at(i, j) + t * at(i, j + 1);
  }

 private:
  ScanGeometry geometry_;
  int n_s_;
  int n_L_;
  double L_min_;
  double L_max_;
  std::vector<double> values_;
};

inline Sinogram make_sinogram(const ScanGeometry& g, const SinogramSpec& spec) {
  if (!(spec.eps_fraction > 0.0 && spec.eps_fraction < 0.5)) {
    throw ConfigError("eps_fraction must lie in (0, 0.5)");
  }
  const double range = g.max_diameter() - g.focal_distance();
  const double eps = spec.eps_fraction * range;
  return Sinogram(g, spec.n_s, spec.n_L, g.focal_distance() + eps, g.max_diameter() - eps);
}

// Integral of the phantom over E(s, L) against arc length, restricted to the
// part of the ellipse inside the support disc. Indicator boundaries crossing
// the arc are located first and the arc is split there, so each Gauss-Legendre
// panel sees a smooth integrand.
class EllipseIntegrator {
 public:
  explicit EllipseIntegrator(const ScanGeometry& g, QuadratureConfig q = {})
      : geometry_(g), config_(q), rule_(q.nodes) {
    if (q.panels < 1 || q.nodes < 1) throw ConfigError("quadrature needs panels >= 1 and nodes >= 1");
  }

  const QuadratureConfig& config() const { return config_; }

  double operator()(const Phantom& p, const EllipseParam& e) const {
    const PhiWindow w = phi_window(geometry_, e.L());
    if (w.empty || p.shapes.empty()) return 0.0;
    const EllipseChart chart(geometry_, e);
    std::vector<double> cuts{w.phi_min, w.phi_max};
    const int samples = std::max(64, config_.panels * config_.nodes);
    const double width = w.width();
    for (const auto& shape : p.shapes) {
      if (!has_jump(shape)) continue;
      auto side = [&](double phi) { return *boundary_function(shape, chart.point(phi)) <= 0.0; };
      double prev_phi = w.phi_min;
      bool prev_in = side(prev_phi);
      for (int k = 1; k <= samples; ++k) {
        const double phi = k == samples ? w.phi_max : w.phi_min + width * k / samples;
        const bool in = side(phi);
        if (in != prev_in) {
          double lo = prev_phi;
          double hi = phi;
          for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (side(mid) == prev_in ? lo : hi) = mid;
          }
          cuts.push_back(0.5 * (lo + hi));
        }
        prev_phi = phi;
        prev_in = in;
      }
    }
    std::sort(cuts.begin(), cuts.end());
    auto integrand = [&](double phi) { return p.evaluate(chart.point(phi)) * chart.arc_element(phi); };
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double lo = cuts[k];
      const double hi = cuts[k + 1];
      if (!(hi > lo)) continue;
      const int panels = std::max(1, static_cast<int>(std::ceil(config_.panels * (hi - lo) / width)));
      total += integrate_panels(rule_, integrand, lo, hi, panels);
    }
    return total;
  }

 private:
  ScanGeometry geometry_;
  QuadratureConfig config_;
  GaussLegendre rule_;
};

inline Sinogram forward(const Phantom& p, const ScanGeometry& g, const SinogramSpec& spec) {
  require_support(p, g.b());
  Sinogram sino = make_sinogram(g, spec);
  const EllipseIntegrator integrate(g, spec.quadrature);
  const std::size_t cells = static_cast<std::size_t>(sino.n_s()) * sino.n_L();
  parallel_for(cells, spec.workers, [&](std::size_t c) {
    const int i = static_cast<int>(c / sino.n_L());
    const int j = static_cast<int>(c % sino.n_L());
    sino.at(i, j) = integrate(p, EllipseParam(g, sino.s(i), sino.L(j)));
  });
  return sino;
}

struct ImageSpec {
  int n = 128;
  int workers = 1;
};

// Backprojection onto an n x n grid over [-b, b]^2. Pixels outside the open
// support disc are set to zero. `extent` must match the sinogram geometry.
inline ImageGrid adjoint(const Sinogram& sino, int n, double extent, int workers = 1) {
  const ScanGeometry& g = sino.geometry();
  if (std::abs(extent - g.b()) > 1e-12 * g.b()) {
    std::ostringstream os;
    os.precision(17);
    os << "image extent " << extent << " does not match the sinogram geometry (b = " << g.b() << ")";
    throw ConfigError(os.str());
  }
  ImageGrid img(n, g.b());
  const int n_s = sino.n_s();
  std::vector<Vec2> rec(n_s), emi(n_s);
  for (int i = 0; i < n_s; ++i) {
    rec[i] = receiver(g, sino.s(i));
    emi[i] = emitter(g, sino.s(i));
  }
  const double ds = sino.ds();
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t row) {
    const int r = static_cast<int>(row);
    std::vector<double> terms(n_s);
    for (int c = 0; c < n; ++c) {
      const Vec2 x = img.center(r, c);
      if (!g.in_support(x)) continue;
      for (int i = 0; i < n_s; ++i) {
        const Vec2 ur = x - rec[i];
        const Vec2 ue = x - emi[i];
        const double dr = norm(ur);
        const double de = norm(ue);
        const double L = dr + de;
        const double v = sino.interpolate(i, L);
        terms[i] = v == 0.0 ? 0.0 : v * norm(ur / dr + ue / de);
      }
      img.at(r, c) = ds * pairwise_sum(terms);
    }
  });
  return img;
}

inline ImageGrid adjoint(const Sinogram& sino, const ImageSpec& spec) {
  return adjoint(sino, spec.n, sino.geometry().b(), spec.workers);
}

inline ImageGrid normal_operator(const Phantom& p, const ScanGeometry& g, const SinogramSpec& sino_spec,
                                 const ImageSpec& image_spec) {
  return adjoint(forward(p, g, sino_spec), image_spec);
}

// Applies D = -d^2/dL^2 along L: central second differences in the interior,
// second-order one-sided stencils (2, -5, 4, -1) at the two ends.
inline Sinogram lambda_filter(const Sinogram& sino) {
  if (sino.n_L() < 5) throw GridTooCoarse("lambda filter needs n_L >= 5, got " + std::to_string(sino.n_L()));
  Sinogram out = sino;
  const int m = sino.n_L();
  const double inv_h2 = 1.0 / (sino.dL() * sino.dL());
  for (int i = 0; i < sino.n_s(); ++i) {
    auto g = [&](int j) { return sino.at(i, j); };
    out.at(i, 0) = -(2.0 * g(0) - 5.0 * g(1) + 4.0 * g(2) - g(3)) * inv_h2;
    for (int j = 1; j + 1 < m; ++j) out.at(i, j) = -(g(j + 1) - 2.0 * g(j) + g(j - 1)) * inv_h2;
    out.at(i, m - 1) = -(2.0 * g(m - 1) - 5.0 * g(m - 2) + 4.0 * g(m - 3) - g(m - 4)) * inv_h2;
  }
  return out;
}

inline ImageGrid lambda_reconstruct(const Sinogram& sino, const ImageSpec& spec) {
  return adjoint(lambda_filter(sino), spec);
}

inline ImageGrid lambda_reconstruct(const Phantom& p, const ScanGeometry& g, const SinogramSpec& sino_spec,
                                    const ImageSpec& image_spec) {
  return lambda_reconstruct(forward(p, g, sino_spec), image_spec);
}

// Discrete L2 inner products with cell measures ds dL and pixel area.
inline double inner_product(const Sinogram& u, const Sinogram& v) {
  if (u.values().size() != v.values().size()) throw ConfigError("sinogram shapes differ");
  std::vector<double> prod(u.values().size());
  for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = u.values()[k] * v.values()[k];
  return pairwise_sum(prod) * u.ds() * u.dL();
}

inline double inner_product(const ImageGrid& u, const ImageGrid& v) {
  if (u.values().size() != v.values().size()) throw ConfigError("image shapes differ");
  std::vector<double> prod(u.values().size());
  for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = u.values()[k] * v.values()[k];
  return pairwise_sum(prod) * u.pixel_area();
}

template <class T>
double l2_norm(const T& u) {
  return std::sqrt(inner_product(u, u));
}

}  // namespace ert

#endif  // ERT_TRANSFORM_HPP
