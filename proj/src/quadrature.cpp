#include "levydev/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace levydev {

double integrate(const RealFn& f, double a, double b, double abs_tol, double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  if (a == b) return 0.0;
  // Boost's tolerance is relative to the L1 norm, so a coarse pass first
  // tells us how to express the absolute target in its terms.
  double l1 = 0.0;
  double err = 0.0;
  const double coarse = gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err, &l1);
  if (l1 == 0.0 || err <= std::max(abs_tol, rel_tol * std::abs(coarse))) return coarse;
  const double tol = std::max({rel_tol, abs_tol / l1, 1e-14});
  return gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol, &err, &l1);
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = p1;
      dp = n * (x * pn - p0) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace levydev
