#ifndef ERT_QUADRATURE_HPP
#define ERT_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ert/error.hpp"
#include "ert/vec2.hpp"

namespace ert {

// Gauss-Legendre rule on [-1, 1]; nodes from Newton iteration on P_n.
class GaussLegendre {
 public:
  explicit GaussLegendre(int n) {
    if (n < 1) throw ConfigError("Gauss-Legendre rule needs at least one node");
    nodes_.resize(n);
    weights_.resize(n);
    // Returns P_n(x) and P_n'(x) by the three-term recurrence.
    auto legendre = [n](double x, double& deriv) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      deriv = n * (x * p1 - p0) / (x * x - 1.0);
      return p1;
    };
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        const double dx = legendre(x, dp) / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      legendre(x, dp);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes_[i] = -x;
      nodes_[n - 1 - i] = x;
      weights_[i] = w;
      weights_[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes_[n / 2] = 0.0;
  }

  int size() const { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  template <class F>
  double integrate(F&& f, double lo, double hi) const {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) sum += weights_[k] * f(mid + half * nodes_[k]);
    return half * sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Composite rule: [lo, hi] split into `panels` equal panels.
template <class F>
double integrate_panels(const GaussLegendre& rule, F&& f, double lo, double hi, int panels) {
  if (panels < 1) panels = 1;
  const double h = (hi - lo) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double l = lo + p * h;
    const double r = (p + 1 == panels) ? hi : l + h;
    sum += rule.integrate(f, l, r);
  }
  return sum;
}

// Pairwise summation; result depends only on the input order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

}  // namespace ert

#endif  // ERT_QUADRATURE_HPP
