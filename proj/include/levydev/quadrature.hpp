#pragma once

#include <functional>
#include <vector>

namespace levydev {

using RealFn = std::function<double(double)>;

// Adaptive Gauss-Kronrod on [a,b]; stops when the error estimate is below
// max(abs_tol, rel_tol * |integral|). b may be +infinity.
double integrate(const RealFn& f, double a, double b, double abs_tol, double rel_tol = 0.0);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule, nodes by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

}  // namespace levydev
