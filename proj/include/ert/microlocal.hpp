#ifndef ERT_MICROLOCAL_HPP
#define ERT_MICROLOCAL_HPP

// Numerical certificates for the injective-immersion property of the left
// projection of the canonical relation of the elliptical transform, and for
// the inequalities behind it.
//
// In the reference frame s = pi/2 the ds-coefficient of the canonical relation
// is S(L, phi). With elliptic coordinates (rho, phi), t = cos(phi) and
// k = sinh(rho) it reduces to
//   H(rho, phi) = 2 k t (a sin(phi) - b k) / (cosh^2(rho) - t^2),
// and on the lower branch phi in (pi, 2pi), H = -2 k Ht(t) with
//   Ht(t) = (b k t + a t sqrt(1 - t^2)) / (cosh^2(rho) - t^2),
// whose derivative has the sign of
//   N = (cosh^2 + t^2)(b k + a sqrt(1 - t^2)) - (cosh^2 - t^2) a t^2 / sqrt(1 - t^2).
// Everything here is a sampled certificate, not a proof.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ert/error.hpp"
#include "ert/geometry.hpp"
#include "ert/parallel.hpp"
#include "ert/vec2.hpp"

namespace ert {

// Order of the transform as a Fourier integral operator, (dim Y - dim Z) / 2.
inline constexpr double fio_order = -0.5;

struct MicrolocalSample {
  double rho = 0.0;
  double phi = 0.0;
  double t = 0.0;  // cos(phi)
  double k = 0.0;  // sinh(rho)
  bool admissible = false;
};

inline bool is_admissible(const ScanGeometry& g, double rho, double phi) {
  return rho > 0.0 && g.in_support(to_cartesian(g, {rho, phi}));
}

inline MicrolocalSample make_sample(const ScanGeometry& g, double rho, double phi) {
  return {rho, phi, std::cos(phi), std::sinh(rho), is_admissible(g, rho, phi)};
}

// ds-coefficient x.R'(s)/|x - R(s)| + x.T'(s)/|x - T(s)| at x = x(s, L, phi).
inline double ds_coefficient(const ScanGeometry& g, double s, double L, double phi) {
  const Vec2 x = ellipse_point(g, EllipseParam(g, s, L), phi);
  const double dr = distance(x, receiver(g, s));
  const double de = distance(x, emitter(g, s));
  detail::check_not_focus(dr, de);
  return dot(x, receiver_deriv(g, s)) / dr + dot(x, emitter_deriv(g, s)) / de;
}

// ds-coefficient in the reference frame, written with the fixed foci (-a, b)
// (receiver) and (a, b) (emitter) and their tangents (-b, -a), (-b, a).
inline double S_value(const ScanGeometry& g, double L, double phi) {
  const double a = g.a();
  const double b = g.b();
  const EllipseChart chart(g, EllipseParam(g, pi / 2, L));
  const Vec2 x = chart.reference_point(phi);
  const double dr = distance(x, Vec2{-a, b});
  const double de = distance(x, Vec2{a, b});
  detail::check_not_focus(dr, de);
  return dot(x, Vec2{-b, -a}) / dr + dot(x, Vec2{-b, a}) / de;
}

inline void require_positive_rho(double rho) {
  if (!(rho > 0.0)) throw DegenerateError("rho must be positive (rho = 0 is the focal segment)");
}

inline double H_value(const ScanGeometry& g, double rho, double phi) {
  require_positive_rho(rho);
  const double ch = std::cosh(rho);
  const double sh = std::sinh(rho);
  const double t = std::cos(phi);
  return 2.0 * sh * t * (g.a() * std::sin(phi) - g.b() * sh) / ((ch + t) * (ch - t));
}

namespace detail {

inline double guarded_root(double t) {
  const double r = 1.0 - t * t;
  if (!(std::abs(t) < 1.0) || r < 1e-24) {
    throw OverflowGuardError("|t| too close to 1: sqrt(1 - t^2) appears in a denominator");
  }
  return std::sqrt(r);
}

}  // namespace detail

inline double Htilde_value(const ScanGeometry& g, double rho, double t) {
  require_positive_rho(rho);
  const double q = detail::guarded_root(t);
  const double sh = std::sinh(rho);
  const double ch2 = 1.0 + sh * sh;
  return (g.b() * sh * t + g.a() * t * q) / (ch2 - t * t);
}

// Numerator N with k = sinh(rho).
inline double N_from_k(const ScanGeometry& g, double k, double t) {
  const double q = detail::guarded_root(t);
  const double ch2 = 1.0 + k * k;
  return (ch2 + t * t) * (g.b() * k + g.a() * q) - (ch2 - t * t) * g.a() * t * t / q;
}

inline double N_value(const ScanGeometry& g, double rho, double t) {
  require_positive_rho(rho);
  return N_from_k(g, std::sinh(rho), t);
}

inline double Htilde_deriv(const ScanGeometry& g, double rho, double t) {
  const double sh = std::sinh(rho);
  const double d = 1.0 + sh * sh - t * t;
  return N_value(g, rho, t) / (d * d);
}

// Right-hand side of the sufficient condition t^2 <= (1 + k^2) / (1 + 2 k^2)
// for N > 0; strictly decreasing in k > 0.
inline double star7_bound(double k) { return (1.0 + k * k) / (1.0 + 2.0 * k * k); }
inline double star7_bound_deriv(double k) {
  const double d = 1.0 + 2.0 * k * k;
  return -2.0 * k / (d * d);
}

// d/dphi H by central differences with one Richardson step.
inline double dphi_H(const ScanGeometry& g, double rho, double phi, double h = 1e-5) {
  auto central = [&](double step) {
    return (H_value(g, rho, phi + step) - H_value(g, rho, phi - step)) / (2.0 * step);
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

// Closed form of d/dphi H on the lower branch: -2 sinh(rho) sqrt(1 - t^2) Ht'(t).
inline double dphi_H_lower_branch(const ScanGeometry& g, double rho, double phi) {
  const double t = std::cos(phi);
  return -2.0 * std::sinh(rho) * detail::guarded_root(t) * Htilde_deriv(g, rho, t);
}

// Bound on cosh^2(rho) over admissible pairs, (4 - 3a^2) / a^2.
inline double cosh2_bound(const ScanGeometry& g) {
  const double a2 = g.a() * g.a();
  return (4.0 - 3.0 * a2) / a2;
}

// Point of the canonical relation in coordinates (s, L, phi, omega).
struct CotangentSample {
  double s = 0.0;
  double L = 0.0;
  double phi = 0.0;
  double omega = 1.0;
  Vec2 x;
  double ds_coefficient = 0.0;  // -omega * ds_coefficient(s, L, phi)
  double dL_coefficient = 0.0;  // omega
  Vec2 dx_covector;             // omega * gradient_weight(x, s).vector
};

inline CotangentSample canonical_sample(const ScanGeometry& g, double s, double L, double phi, double omega) {
  if (omega == 0.0) throw DomainError("omega must be nonzero");
  CotangentSample c;
  c.s = reduce_angle(s);
  c.L = L;
  c.phi = phi;
  c.omega = omega;
  c.x = ellipse_point(g, EllipseParam(g, s, L), phi);
  c.ds_coefficient = -omega * ds_coefficient(g, s, L, phi);
  c.dL_coefficient = omega;
  c.dx_covector = omega * gradient_weight(g, c.x, s).vector;
  return c;
}

// ---------------------------------------------------------------------------
// Reports

struct Location {
  double L = std::numeric_limits<double>::quiet_NaN();
  double phi = std::numeric_limits<double>::quiet_NaN();
  double rho = std::numeric_limits<double>::quiet_NaN();
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double min_margin = std::numeric_limits<double>::infinity();
  Location argmin;
  std::size_t samples = 0;
  std::string detail;
};

struct LemmaReport {
  std::string name;
  double alpha = 0.0;
  int n_rho = 0;
  int n_phi = 0;
  std::size_t admissible = 0;
  std::size_t violations = 0;
  double bound = 0.0;            // b for the cosine bound, (4 - 3a^2)/a^2 for the cosh bound
  double extremal = 0.0;         // largest admissible |cos phi| or cosh^2 rho
  Location extremal_at;
  bool pass = false;
};

struct SweepGrid {
  int n_rho = 512;
  int n_phi = 512;
};

namespace detail {

template <class Quantity>
LemmaReport lemma_sweep(const ScanGeometry& g, const SweepGrid& grid, std::string name, double bound,
                        Quantity&& quantity) {
  LemmaReport r;
  r.name = std::move(name);
  r.alpha = g.alpha();
  r.n_rho = grid.n_rho;
  r.n_phi = grid.n_phi;
  r.bound = bound;
  r.extremal = -std::numeric_limits<double>::infinity();
  // rho range extends a quarter beyond the admissible bound so that the sweep
  // also sees non-admissible pairs.
  const double rho_top = 1.25 * std::acosh(std::sqrt(cosh2_bound(g)));
  for (int i = 0; i < grid.n_rho; ++i) {
    const double rho = rho_top * (i + 1.0) / grid.n_rho;
    for (int j = 0; j < grid.n_phi; ++j) {
      const double phi = two_pi * j / grid.n_phi;
      if (!is_admissible(g, rho, phi)) continue;
      ++r.admissible;
      const double q = quantity(rho, phi);
      if (q > bound) ++r.violations;
      if (q > r.extremal) {
        r.extremal = q;
        r.extremal_at = {diameter_from_rho(g, rho), phi, rho};
      }
    }
  }
  r.pass = r.admissible > 0 && r.violations == 0;
  return r;
}

}  // namespace detail

// No admissible pair has |cos phi| > b.
inline LemmaReport lemma1_check(const ScanGeometry& g, const SweepGrid& grid = {}) {
  return detail::lemma_sweep(g, grid, "lemma1_cos_phi_bound", g.b(),
                             [](double, double phi) { return std::abs(std::cos(phi)); });
}

// No admissible pair has cosh^2 rho > (4 - 3a^2) / a^2.
inline LemmaReport lemma2_check(const ScanGeometry& g, const SweepGrid& grid = {}) {
  return detail::lemma_sweep(g, grid, "lemma2_cosh2_rho_bound", cosh2_bound(g), [](double rho, double) {
    const double c = std::cosh(rho);
    return c * c;
  });
}

struct PropositionReport {
  std::string name;
  double alpha = 0.0;
  bool hypothesis = false;  // alpha > 0.8 (prop 1) or alpha < 1.2 (prop 2)
  bool inequality = false;  // the key inequality the proof reduces to
  double margin = 0.0;      // signed slack of that inequality
  std::vector<std::pair<std::string, double>> values;
  bool pass = false;  // hypothesis && every verified step holds
};

// For alpha > 0.8: 1 - a^2 < (4 - 3a^2)/(8 - 7a^2), with the right side equal to
// the minimum of (1 + k^2)/(1 + 2k^2) over admissible k <= 2b/a.
inline PropositionReport prop1_check(double alpha, int n_k = 4096) {
  const ScanGeometry g(alpha);
  const double a2 = g.a() * g.a();
  PropositionReport r;
  r.name = "prop1_alpha_gt_0.8";
  r.alpha = alpha;
  r.hypothesis = alpha > 0.8;
  const double lhs = 1.0 - a2;
  const double rhs = (4.0 - 3.0 * a2) / (8.0 - 7.0 * a2);
  r.margin = rhs - lhs;
  r.inequality = r.margin > 0.0;
  const double k_extreme = 2.0 * g.b() / g.a();
  const double chain_error = std::abs(star7_bound(k_extreme) - rhs);
  // Sampled monotonicity of the bound on (0, k_extreme].
  double max_slope = -std::numeric_limits<double>::infinity();
  double min_sampled = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= n_k; ++i) {
    const double k = k_extreme * i / n_k;
    max_slope = std::max(max_slope, star7_bound_deriv(k));
    min_sampled = std::min(min_sampled, star7_bound(k));
  }
  r.values = {{"one_minus_a2", lhs},
              {"bound_at_k_extreme", rhs},
              {"k_extreme", k_extreme},
              {"chain_error", chain_error},
              {"max_bound_slope", max_slope},
              {"min_sampled_bound_minus_rhs", min_sampled - rhs}};
  r.pass = r.hypothesis && r.inequality && chain_error < 1e-12 && max_slope < 0.0 &&
           min_sampled - rhs >= -1e-12;
  return r;
}

// Largest alpha for which b x^2 - x + 2b has no real roots:
// b > 1 / (2 sqrt 2), i.e. alpha < arccos(1 / (2 sqrt 2)).
inline double quadratic_threshold_alpha() { return std::acos(1.0 / (2.0 * std::sqrt(2.0))); }

inline double quadratic_discriminant(double b) { return 1.0 - 8.0 * b * b; }

// For alpha < 1.2: the discriminant 1 - 8b^2 is negative, so the lower bound
//   (b k + 1) cosh^2 / (cosh^2 + k^2 - b k)
// on the admissible t^2 exceeds 1 for every k > 0, and N > 0 whenever |t| <= b.
inline PropositionReport prop2_check(double alpha, int n_k = 1024, int n_t = 1024) {
  const ScanGeometry g(alpha);
  const double b = g.b();
  PropositionReport r;
  r.name = "prop2_alpha_lt_1.2";
  r.alpha = alpha;
  r.hypothesis = alpha < 1.2;
  const double disc = quadratic_discriminant(b);
  r.margin = -disc;
  r.inequality = disc < 0.0;
  const double k_top = 2.0 * b / g.a();
  double est3_margin = std::numeric_limits<double>::infinity();
  double min_N = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= n_k; ++i) {
    const double k = k_top * i / n_k;
    const double ch2 = 1.0 + k * k;
    est3_margin = std::min(est3_margin, (b * k + 1.0) * ch2 / (ch2 + k * k - b * k) - 1.0);
    for (int j = 0; j <= n_t; ++j) {
      const double t = -b + 2.0 * b * j / n_t;
      min_N = std::min(min_N, N_from_k(g, k, t));
    }
  }
  r.values = {{"b", b}, {"discriminant", disc}, {"est3_lhs_minus_one", est3_margin}, {"min_N_abs_t_le_b", min_N}};
  r.pass = r.hypothesis && r.inequality && est3_margin > 0.0 && min_N > 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Bolker certificate

struct BolkerGrid {
  int n_L = 512;
  int n_phi = 512;
  double fd_step = 1e-5;
  int refine = 33;  // local refinement points per axis around the worst cell
  int workers = 1;
};

struct BolkerCertificate {
  double alpha = 0.0;
  BolkerGrid grid;
  std::vector<CheckResult> checks;
  double order = fio_order;

  bool pass() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

namespace detail {

struct RowResult {
  double min_dH = std::numeric_limits<double>::infinity();
  double min_dH_phi = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  double min_gap_phi = 0.0;
  bool monotone = true;
  double min_N = std::numeric_limits<double>::infinity();
  double min_N_phi = 0.0;
  double min_weight = std::numeric_limits<double>::infinity();
  double min_weight_phi = 0.0;
  std::size_t samples = 0;
  std::size_t inadmissible = 0;
};

inline double cell_phi(const PhiWindow& w, int j, int n) { return w.phi_min + w.width() * (j + 0.5) / n; }

}  // namespace detail

inline BolkerCertificate bolker_certificate(double alpha, const BolkerGrid& grid = {}) {
  const ScanGeometry g(alpha);
  const double L_lo = g.focal_distance();
  const double L_span = g.max_diameter() - L_lo;
  auto L_at = [&](double u) { return L_lo + L_span * u; };

  std::vector<detail::RowResult> rows(grid.n_L);
  parallel_for(static_cast<std::size_t>(grid.n_L), grid.workers, [&](std::size_t row) {
    detail::RowResult& r = rows[row];
    const double L = L_at((row + 0.5) / grid.n_L);
    const PhiWindow w = phi_window(g, L);
    if (w.empty) return;
    const double rho = rho_from_diameter(g, L);
    const double k = std::sinh(rho);
    double prev_S = 0.0;
    int sign = 0;
    for (int j = 0; j < grid.n_phi; ++j) {
      const double phi = detail::cell_phi(w, j, grid.n_phi);
      ++r.samples;
      if (!is_admissible(g, rho, phi)) ++r.inadmissible;
      const double dH = std::abs(dphi_H(g, rho, phi, grid.fd_step));
      if (dH < r.min_dH) {
        r.min_dH = dH;
        r.min_dH_phi = phi;
      }
      const double S = S_value(g, L, phi);
      if (j > 0) {
        const double diff = S - prev_S;
        const int sgn = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
        if (sgn == 0 || (sign != 0 && sgn != sign)) r.monotone = false;
        if (sign == 0) sign = sgn;
        if (std::abs(diff) < r.min_gap) {
          r.min_gap = std::abs(diff);
          r.min_gap_phi = phi;
        }
      }
      prev_S = S;
      const double N = N_from_k(g, k, std::cos(phi));
      if (N < r.min_N) {
        r.min_N = N;
        r.min_N_phi = phi;
      }
      const Vec2 x = to_cartesian(g, {rho, phi});
      const double weight = gradient_weight(g, x, pi / 2).magnitude;
      if (weight < r.min_weight) {
        r.min_weight = weight;
        r.min_weight_phi = phi;
      }
    }
  });

  BolkerCertificate cert;
  cert.alpha = alpha;
  cert.grid = grid;
  CheckResult dH{"dphi_H_nonzero"};
  CheckResult mono{"S_strictly_monotone"};
  CheckResult npos{"N_positive"};
  CheckResult zero{"dx_covector_nonzero"};
  std::size_t inadmissible = 0;
  bool monotone = true;
  int worst_row = 0;
  for (int i = 0; i < grid.n_L; ++i) {
    const auto& r = rows[i];
    const double L = L_at((i + 0.5) / grid.n_L);
    const double rho = rho_from_diameter(g, L);
    auto update = [&](CheckResult& c, double v, double phi) {
      c.samples += r.samples;
      if (v < c.min_margin) {
        c.min_margin = v;
        c.argmin = {L, phi, rho};
        return true;
      }
      return false;
    };
    if (update(dH, r.min_dH, r.min_dH_phi)) worst_row = i;
    update(mono, r.min_gap, r.min_gap_phi);
    update(npos, r.min_N, r.min_N_phi);
    update(zero, r.min_weight, r.min_weight_phi);
    inadmissible += r.inadmissible;
    monotone = monotone && r.monotone;
  }

  // Local refinement of |dH/dphi| over the cells neighbouring the worst sample.
  if (grid.refine > 1 && std::isfinite(dH.min_margin)) {
    const double u_lo = std::max(0.0, (worst_row - 0.5) / grid.n_L);
    const double u_hi = std::min(1.0, (worst_row + 1.5) / grid.n_L);
    for (int p = 0; p < grid.refine; ++p) {
      const double L = L_at(u_lo + (u_hi - u_lo) * (p + 0.5) / grid.refine);
      const PhiWindow w = phi_window(g, L);
      if (w.empty) continue;
      const double rho = rho_from_diameter(g, L);
      const double phi_c = dH.argmin.phi;
      const double cell = w.width() / grid.n_phi;
      for (int q = 0; q < grid.refine; ++q) {
        const double phi = std::clamp(phi_c - cell + 2.0 * cell * (q + 0.5) / grid.refine,
                                      w.phi_min + 0.5 * cell / grid.refine, w.phi_max - 0.5 * cell / grid.refine);
        const double v = std::abs(dphi_H(g, rho, phi, grid.fd_step));
        ++dH.samples;
        if (v < dH.min_margin) {
          dH.min_margin = v;
          dH.argmin = {L, phi, rho};
        }
      }
    }
  }

  dH.pass = dH.min_margin > 0.0 && inadmissible == 0;
  dH.detail = "min |d/dphi H| over admissible samples, with local refinement";
  mono.pass = monotone && mono.min_margin > 1e-12;
  mono.detail = "per-L consecutive gaps of S(L, .), all of one sign and above 1e-12";
  npos.pass = npos.min_margin > 0.0;
  npos.detail = "min N(rho, cos phi) over admissible samples";
  zero.pass = zero.min_margin > 0.0;
  zero.detail = "min |grad_x level| at admissible points (dx covector per unit omega)";
  if (inadmissible > 0) {
    dH.detail += "; " + std::to_string(inadmissible) + " window samples were not admissible";
  }
  cert.checks = {dH, mono, npos, zero};
  return cert;
}

// ---------------------------------------------------------------------------
// Conormal search

struct ConormalResult {
  double s0 = 0.0;
  double L0 = 0.0;
  int omega_sign = 1;
  double mismatch = 0.0;  // residual angle between gradient and target direction
};

// Angle between the gradient direction of level(x, .) at s and theta, in (-pi, pi].
inline double conormal_mismatch(const ScanGeometry& g, const Vec2& x, double s, double theta) {
  const Vec2 v = gradient_weight(g, x, s).vector;
  return wrap_pi(std::atan2(v.y, v.x) - theta);
}

// Finds s0 such that the gradient of level(., s0) at x points along
// (cos theta, sin theta), so the ellipse E(s0, level(x, s0)) is conormal to
// that covector with omega > 0.
inline ConormalResult conormal_search(const ScanGeometry& g, const Vec2& x, double theta, int samples = 720) {
  if (!g.in_support(x)) throw DomainError("conormal search needs x inside the support disc");
  std::vector<double> curve(samples + 1);
  for (int k = 0; k <= samples; ++k) curve[k] = conormal_mismatch(g, x, two_pi * k / samples, theta);
  for (int k = 0; k < samples; ++k) {
    const double m0 = curve[k];
    const double m1 = curve[k + 1];
    // A genuine root: sign change away from the +-pi branch cut.
    const bool bracket = (m0 <= 0.0 && m1 >= 0.0) || (m0 >= 0.0 && m1 <= 0.0);
    if (!bracket || std::abs(m0) > pi / 2 || std::abs(m1) > pi / 2) continue;
    double lo = two_pi * k / samples;
    double hi = two_pi * (k + 1) / samples;
    double f_lo = m0;
    for (int it = 0; it < 200 && f_lo != 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const double f_mid = conormal_mismatch(g, x, mid, theta);
      if ((f_mid <= 0.0) == (f_lo <= 0.0) && f_mid != 0.0) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    const double m_lo = std::abs(conormal_mismatch(g, x, lo, theta));
    const double m_hi = std::abs(conormal_mismatch(g, x, hi, theta));
    ConormalResult r;
    r.s0 = reduce_angle(m_lo <= m_hi ? lo : hi);
    r.L0 = level(g, x, r.s0);
    const Vec2 v = gradient_weight(g, x, r.s0).vector;
    r.omega_sign = dot(v, Vec2{std::cos(theta), std::sin(theta)}) >= 0.0 ? 1 : -1;
    r.mismatch = std::min(m_lo, m_hi);
    return r;
  }
  std::ostringstream os;
  os.precision(6);
  os << "conormal search failed to bracket theta = " << theta << " at x = (" << x.x << ", " << x.y
     << "); mismatch curve sampled every " << samples / 36 << " of " << samples << " points:";
  for (int k = 0; k <= samples; k += std::max(1, samples / 36)) os << ' ' << curve[k];
  throw BracketError(os.str());
}

}  // namespace ert

#endif  // ERT_MICROLOCAL_HPP
