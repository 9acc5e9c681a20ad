#pragma once

#include <span>
#include <vector>

#include "levydev/basis.hpp"
#include "levydev/levy.hpp"
#include "levydev/quadrature.hpp"

namespace levydev {

// sum_r coeffs[r] phi_r(x) over a basis system; coefficient r = cell*(J+1) + j.
class CoefficientExpansion {
 public:
  CoefficientExpansion(BasisSystem system, std::vector<double> coeffs);

  const BasisSystem& system() const { return system_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  // Throws std::domain_error outside the window.
  double operator()(double x) const;
  // Value inside a cell at unit coordinate t; `piece` as in unit_basis_values.
  double cell_value(int cell, double t, int piece = -1) const;

 private:
  BasisSystem system_;
  std::vector<double> coeffs_;
};

struct ProjectionEstimate {
  CoefficientExpansion expansion;
  std::size_t n;
  double delta;

  double horizon() const { return static_cast<double>(n) * delta; }
};

// beta_r = (1/(n delta)) sum_k phi_r(X_k), Neumaier-compensated.
std::vector<double> estimate_coefficients(std::span<const double> increments, double delta,
                                          const BasisSystem& system);
std::vector<double> estimate_coefficients(const IncrementSample& sample, const BasisSystem& system);
ProjectionEstimate make_estimate(const IncrementSample& sample, const BasisSystem& system);
double evaluate_estimate(const ProjectionEstimate& est, double x);

// L2 projection of f onto the system, coefficients by adaptive quadrature.
CoefficientExpansion project(const RealFn& f, const BasisSystem& system, double abs_tol = 1e-12);
CoefficientExpansion projection_truth(const LevyModel& model, const BasisSystem& system);
// Mean of the estimator: coefficients (1/delta) E phi_r(X_delta).
CoefficientExpansion expected_estimate(const LevyModel& model, const BasisSystem& system, double delta);

enum class DeviationMode { AgainstTruth, AgainstExpectation };

struct DeviationReport {
  double statistic;
  double argmax_x;
  std::size_t grid;
  DeviationMode mode;
};

// sup_D |est - reference| / sqrt(s). Each smooth piece of each cell is
// scanned on an equispaced grid including both (one-sided) endpoints, and
// the grid is doubled until the statistic moves by less than 1e-6 relative.
// For Haar with piecewise-constant reference and s this stops at once.
DeviationReport deviation_stat(const CoefficientExpansion& est, const RealFn& reference, const RealFn& s,
                               std::size_t grid, DeviationMode mode);
DeviationReport deviation_stat(const ProjectionEstimate& est, const RealFn& reference, const RealFn& s,
                               std::size_t grid, DeviationMode mode);

// Smallest grid deviation_stat accepts for a system.
std::size_t min_deviation_grid(const BasisSystem& system);

}  // namespace levydev
