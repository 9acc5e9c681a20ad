#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "levydev/basis.hpp"

namespace levydev {

struct CompoundPoissonExp {
  double lambda;  // jump intensity
  double eta;     // exponential jump rate
};

struct GammaProcess {
  double c;    // shape rate per unit time
  double rho;  // exponential rate
};

// Pure-jump, spectrally positive Levy process with closed-form transition law.
class LevyModel {
 public:
  static LevyModel compound_poisson_exp(double lambda, double eta);
  static LevyModel gamma(double c, double rho);

  bool is_compound_poisson() const { return std::holds_alternative<CompoundPoissonExp>(params_); }
  const std::variant<CompoundPoissonExp, GammaProcess>& params() const { return params_; }
  std::string name() const;

 private:
  explicit LevyModel(std::variant<CompoundPoissonExp, GammaProcess> p) : params_(p) {}
  std::variant<CompoundPoissonExp, GammaProcess> params_;
};

double levy_density(const LevyModel& model, double x);
// nu([x, inf))
double levy_tail(const LevyModel& model, double x);

struct IncrementSample {
  LevyModel model;
  double delta;
  std::uint64_t seed;
  std::vector<double> values;

  std::size_t n() const { return values.size(); }
  double horizon() const { return delta * static_cast<double>(values.size()); }
};

// Increment k is drawn from stream (seed, k), so the result does not depend
// on `workers`.
IncrementSample sample_increments(const LevyModel& model, std::size_t n, double delta, std::uint64_t seed,
                                  unsigned workers = 1);

// Absolutely continuous part of the law of X_delta; 0 for x <= 0.
double transition_density(const LevyModel& model, double delta, double x);
// P{X_delta = 0}: e^{-lambda delta} for compound Poisson, 0 for Gamma.
double transition_atom(const LevyModel& model, double delta);
// P{X_delta >= x} for x > 0 by quadrature of transition_density.
double transition_tail(const LevyModel& model, double delta, double x);

// sup over `grid` equispaced points of D of |P{X_delta >= x}/delta - nu([x,inf))|,
// the probability obtained by integrating transition_density.
double small_time_check(const LevyModel& model, const Window& window, double delta, int grid);

// max over delta in {1e-2, 1e-3, 1e-4} of small_time_check(delta)/delta.
double fitted_small_time_q(const LevyModel& model, const Window& window, int grid = 201);

}  // namespace levydev
