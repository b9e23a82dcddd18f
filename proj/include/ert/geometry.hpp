#ifndef ERT_GEOMETRY_HPP
#define ERT_GEOMETRY_HPP

// Scan geometry for a transmitter/receiver pair rotating on the unit circle
// with a fixed angular separation 2*alpha, and the family of ellipses whose
// foci are the pair.
//
// Conventions:
//   emitter(s)  = (cos(s - alpha), sin(s - alpha))
//   receiver(s) = (cos(s + alpha), sin(s + alpha))
//   a = sin(alpha) (half focal distance), b = cos(alpha) (support radius)
//
// Ellipse points are parameterized in the reference frame s = pi/2, where the
// foci are (+-a, b), by elliptic coordinates
//   x'(rho, phi) = (a cosh(rho) cos(phi), b + a sinh(rho) sin(phi)),
// with the major diameter L = 2a cosh(rho). The ellipse for general s is the
// rotation of the reference ellipse by s - pi/2.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ert/error.hpp"
#include "ert/vec2.hpp"

namespace ert {

class ScanGeometry {
 public:
  explicit ScanGeometry(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < pi / 2)) {
      std::ostringstream os;
      os.precision(17);
      os << "alpha = " << alpha << " outside the valid open interval (0, pi/2)";
      throw DomainError(os.str());
    }
    a_ = std::sin(alpha);
    b_ = std::cos(alpha);
  }

  double alpha() const { return alpha_; }
  double a() const { return a_; }
  double b() const { return b_; }

  // Distance between the foci; every ellipse has L > focal_distance().
  double focal_distance() const { return 2.0 * a_; }
  // Supremum of major diameters of ellipses meeting the open disc |x| < b.
  double max_diameter() const { return 2.0 * std::sqrt(a_ * a_ + 4.0 * b_ * b_); }

  bool in_support(const Vec2& x) const { return norm2(x) < b_ * b_; }

  friend bool operator==(const ScanGeometry& l, const ScanGeometry& r) {
    return l.alpha_ == r.alpha_;
  }

 private:
  double alpha_;
  double a_ = 0.0;
  double b_ = 0.0;
};

inline ScanGeometry make_geometry(double alpha) { return ScanGeometry(alpha); }

// A point (s, L) of the ellipse parameter space.
class EllipseParam {
 public:
  EllipseParam(const ScanGeometry& g, double s, double L) : s_(reduce_angle(s)), L_(L) {
    if (!(L > g.focal_distance())) {
      std::ostringstream os;
      os.precision(17);
      os << "major diameter L = " << L << " must exceed the focal distance 2a = "
         << g.focal_distance();
      throw DomainError(os.str());
    }
  }

  double s() const { return s_; }
  double L() const { return L_; }

 private:
  double s_;
  double L_;
};

struct EllipticCoord {
  double rho = 0.0;
  double phi = 0.0;
};

struct PhiWindow {
  double phi_min = 0.0;
  double phi_max = 0.0;
  bool empty = true;

  double width() const { return empty ? 0.0 : phi_max - phi_min; }
  bool contains(double phi) const { return !empty && phi > phi_min && phi < phi_max; }
};

struct GradientWeight {
  Vec2 vector;  // sum of the unit vectors from each focus towards x
  double magnitude = 0.0;
};

inline Vec2 emitter(const ScanGeometry& g, double s) {
  return {std::cos(s - g.alpha()), std::sin(s - g.alpha())};
}
inline Vec2 receiver(const ScanGeometry& g, double s) {
  return {std::cos(s + g.alpha()), std::sin(s + g.alpha())};
}
inline Vec2 emitter_deriv(const ScanGeometry& g, double s) {
  return {-std::sin(s - g.alpha()), std::cos(s - g.alpha())};
}
inline Vec2 receiver_deriv(const ScanGeometry& g, double s) {
  return {-std::sin(s + g.alpha()), std::cos(s + g.alpha())};
}

namespace detail {

inline constexpr double focus_tolerance = 1e-14;

inline void check_not_focus(double d_receiver, double d_emitter) {
  if (d_receiver < focus_tolerance || d_emitter < focus_tolerance) {
    throw SingularPointError("point coincides with a focus");
  }
}

}  // namespace detail

// Focal-distance sum |x - receiver(s)| + |x - emitter(s)|; the ellipse E(s, L)
// is its L level set.
inline double level(const ScanGeometry& g, const Vec2& x, double s) {
  const double dr = distance(x, receiver(g, s));
  const double de = distance(x, emitter(g, s));
  detail::check_not_focus(dr, de);
  return dr + de;
}

// True when x lies on the closed segment between the foci (within tol of the
// degenerate level 2a).
inline bool on_focal_segment(const ScanGeometry& g, const Vec2& x, double s, double tol = 1e-12) {
  const double sum = distance(x, receiver(g, s)) + distance(x, emitter(g, s));
  return sum - g.focal_distance() <= tol;
}

// x-gradient of level(., s). Its magnitude is the backprojection weight.
inline GradientWeight gradient_weight(const ScanGeometry& g, const Vec2& x, double s) {
  const Vec2 from_r = x - receiver(g, s);
  const Vec2 from_e = x - emitter(g, s);
  const double dr = norm(from_r);
  const double de = norm(from_e);
  detail::check_not_focus(dr, de);
  GradientWeight w;
  w.vector = from_r / dr + from_e / de;
  w.magnitude = norm(w.vector);
  if (w.magnitude < 1e-12) {
    throw DegenerateWeightError("gradient of the focal-distance sum vanishes on the focal segment");
  }
  return w;
}

inline double rho_from_diameter(const ScanGeometry& g, double L) {
  return std::acosh(L / g.focal_distance());
}
inline double diameter_from_rho(const ScanGeometry& g, double rho) {
  return g.focal_distance() * std::cosh(rho);
}

// Reference-frame (s = pi/2) point with elliptic coordinates (rho, phi).
inline Vec2 to_cartesian(const ScanGeometry& g, const EllipticCoord& c) {
  return {g.a() * std::cosh(c.rho) * std::cos(c.phi), g.b() + g.a() * std::sinh(c.rho) * std::sin(c.phi)};
}

// Inverse of to_cartesian for reference-frame points off the focal segment.
inline EllipticCoord to_elliptic(const ScanGeometry& g, const Vec2& xr) {
  const double a = g.a();
  const double b = g.b();
  const double d1 = distance(xr, Vec2{-a, b});
  const double d2 = distance(xr, Vec2{a, b});
  const double ch = std::max(1.0, (d1 + d2) / (2.0 * a));
  const double rho = std::acosh(ch);
  const double sh = std::sinh(rho);
  if (sh < 1e-12) throw SingularPointError("elliptic coordinates are singular on the focal segment");
  const double phi = std::atan2((xr.y - b) / (a * sh), xr.x / (a * ch));
  return {rho, reduce_angle(phi)};
}

// Precomputed chart x(s, L, phi) on a single ellipse E(s, L).
class EllipseChart {
 public:
  EllipseChart(const ScanGeometry& g, const EllipseParam& e)
      : a_(g.a()), b_(g.b()), rho_(rho_from_diameter(g, e.L())), rot_(e.s() - pi / 2) {
    cosh_ = std::cosh(rho_);
    sinh_ = std::sinh(rho_);
  }

  double rho() const { return rho_; }
  double cosh_rho() const { return cosh_; }
  double sinh_rho() const { return sinh_; }

  Vec2 reference_point(double phi) const {
    return {a_ * cosh_ * std::cos(phi), b_ + a_ * sinh_ * std::sin(phi)};
  }
  Vec2 point(double phi) const { return rot_(reference_point(phi)); }

  // |dx/dphi|, the arc-length Jacobian.
  double arc_element(double phi) const {
    const double sp = std::sin(phi);
    return a_ * std::sqrt(sinh_ * sinh_ + sp * sp);
  }

 private:
  double a_;
  double b_;
  double rho_;
  double cosh_ = 1.0;
  double sinh_ = 0.0;
  Rotation rot_;
};

inline Vec2 ellipse_point(const ScanGeometry& g, const EllipseParam& e, double phi) {
  return EllipseChart(g, e).point(phi);
}

inline double arc_length_element(const ScanGeometry& g, const EllipseParam& e, double phi) {
  return EllipseChart(g, e).arc_element(phi);
}

// Open phi-interval on which the reference ellipse of diameter L lies inside
// the support disc. The interval is located by bisection outward from the
// bottom vertex phi = 3pi/2, which is inside the disc for every L meeting it.
inline PhiWindow phi_window(const ScanGeometry& g, double L) {
  PhiWindow w;
  if (!(L > g.focal_distance() && L < g.max_diameter())) return w;
  const double a = g.a();
  const double b = g.b();
  const double ch = L / g.focal_distance();
  const double sh = std::sqrt(ch * ch - 1.0);
  auto excess = [&](double phi) {
    const double x = a * ch * std::cos(phi);
    const double y = b + a * sh * std::sin(phi);
    return x * x + y * y - b * b;
  };
  // Finds the sign change of excess on [inside, outside].
  auto bisect = [&](double inside, double outside) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (inside + outside);
      if (mid == inside || mid == outside) break;
      if (excess(mid) < 0.0) {
        inside = mid;
      } else {
        outside = mid;
      }
    }
    return inside;
  };
  const double mid = 1.5 * pi;
  w.phi_min = bisect(mid, pi);
  w.phi_max = bisect(mid, two_pi);
  w.empty = !(w.phi_min < w.phi_max);
  return w;
}

}  // namespace ert

#endif  // ERT_GEOMETRY_HPP
