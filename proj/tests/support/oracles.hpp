#ifndef ERT_TESTS_ORACLES_HPP
#define ERT_TESTS_ORACLES_HPP

// Independent reference computations for the tests. Nothing here goes through
// the library's quadrature, elliptic coordinates or phi windows.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

struct Point {
  double x;
  double y;
};

// Recursive adaptive Simpson. Discontinuous integrands terminate through the
// depth limit, which confines the unresolved error to intervals of width
// (hi - lo) / 2^max_depth.
class AdaptiveSimpson {
 public:
  AdaptiveSimpson(double tol, int max_depth) : tol_(tol), max_depth_(max_depth) {}

  double operator()(const std::function<double(double)>& f, double lo, double hi, int initial = 1) const {
    double total = 0.0;
    const double h = (hi - lo) / initial;
    for (int k = 0; k < initial; ++k) {
      const double a = lo + k * h;
      const double b = a + h;
      const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
      total += recurse(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol_ / initial, 0);
    }
    return total;
  }

 private:
  static double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }

  double recurse(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double diff = left + right - whole;
    if (depth >= max_depth_ || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  double tol_;
  int max_depth_;
};

// Ellipse with foci on the unit circle at angles s -+ alpha and major
// diameter L, parameterized by the standard eccentric angle u:
//   c + (L/2) cos(u) e1 + B sin(u) e2,   B = sqrt(L^2/4 - sin^2 alpha),
// with c = cos(alpha) (cos s, sin s) and e1 along the focal chord.
struct FocalEllipse {
  double alpha, s, L;

  double semi_minor() const {
    const double a = std::sin(alpha);
    return std::sqrt(0.25 * L * L - a * a);
  }
  Point at(double u) const {
    const double cb = std::cos(alpha);
    const Point c{cb * std::cos(s), cb * std::sin(s)};
    const Point e1{std::sin(s), -std::cos(s)};
    const Point e2{std::cos(s), std::sin(s)};
    const double A = 0.5 * L, B = semi_minor();
    return {c.x + A * std::cos(u) * e1.x + B * std::sin(u) * e2.x,
            c.y + A * std::cos(u) * e1.y + B * std::sin(u) * e2.y};
  }
  double speed(double u) const {
    const double A = 0.5 * L, B = semi_minor();
    return std::sqrt(A * A * std::sin(u) * std::sin(u) + B * B * std::cos(u) * std::cos(u));
  }
};

// Integral of f over the full ellipse against arc length.
inline double ellipse_line_integral(const FocalEllipse& e, const std::function<double(Point)>& f,
                                    double tol = 1e-11, int max_depth = 48, int initial = 2048) {
  AdaptiveSimpson simpson(tol, max_depth);
  return simpson([&](double u) { return f(e.at(u)) * e.speed(u); }, 0.0, 2.0 * std::numbers::pi, initial);
}

template <class F>
double central_difference(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle

#endif  // ERT_TESTS_ORACLES_HPP
