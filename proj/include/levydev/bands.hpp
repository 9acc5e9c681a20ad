#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levydev/estimator.hpp"
#include "levydev/limits.hpp"

namespace levydev {

// y with gumbel_cdf(y) = level.
double gumbel_quantile(double level);
// y with accompanying_cdf(params, y) = level, by bisection.
double accompanying_quantile(const LimitLawParams& params, double level,
                             AccompanyingForm form = AccompanyingForm::Stated);

enum class BandQuantile { Gumbel, Accompanying };

struct BandOptions {
  double level = 0.9;
  double s_floor = 1e-6;
  BandQuantile quantile = BandQuantile::Gumbel;
  TrigConvention convention = TrigConvention::BasisCount;
  std::size_t points = 1001;  // equispaced over the window, endpoints included
};

struct ConfidenceBand {
  std::vector<double> x;
  std::vector<double> estimate;
  std::vector<double> lower;
  std::vector<double> upper;
  double level;
  double half_width_scale;  // sqrt(m/T) (u_m(y_level) + shift)
  double threshold;         // u_m(y_level) + shift
};

// Band s_hat -+ sqrt(max(s_hat, s_floor)) * half_width_scale, lower clipped at 0.
// Requires T = n^kappa (bias.kappa) to 1e-9.
ConfidenceBand confidence_band(const ProjectionEstimate& est, const BiasConstants& bias, const BandOptions& options);

// u_m(y_level) + bias_shift for the given law parameters.
double band_threshold(const LimitLawParams& params, double n, const BiasConstants& bias, const BandOptions& options);

struct CoverageConfig {
  LevyModel model = LevyModel::gamma(1.0, 1.0);
  BasisFamily family = BasisFamily::haar();
  Window window{0.5, 1.5};
  double kappa = 0.6;
  std::size_t n = 100'000;
  std::vector<double> levels{0.9};
  std::size_t reps = 200;
  std::uint64_t seed = 1;
  std::optional<int> m;         // default optimal_m(n, kappa)
  std::optional<double> q;      // default 2 x fitted small-time q
  bool include_shift = true;
  TrigConvention convention = TrigConvention::BasisCount;
  std::size_t grid = 0;         // deviation grid; 0 picks the minimum
  unsigned workers = 1;
};

struct CoverageReport {
  int m;
  double T;
  double delta;
  double lambda_n;
  double q;
  double brevec;
  double shift;
  LimitLawParams params;
  std::vector<std::string> warnings;
  std::vector<double> levels;
  std::vector<double> thresholds;  // per level, on the sqrt(T/m)-scaled statistic
  std::vector<double> coverage;    // per level
  std::vector<double> statistics;  // per rep: sqrt(T/m) sup_D |s_hat - s| / sqrt(s)
};

// Simulates reps independent samples and records the true-s weighted
// maximal deviation. Throws on structural violations (kappa outside (0,1),
// window containing 0, h1 m <= e); Lambda_n > 0.5 and kappa outside the
// optimal-m regime only add warnings.
CoverageReport coverage_experiment(const CoverageConfig& config);

// Fraction of max-of-m Gaussian cell suprema (cell width b - a) above
// u_m(gumbel_quantile(level)): the non-coverage of the Gaussian surrogate.
double surrogate_noncoverage(const BasisFamily& family, const Window& window, int m, double level, std::size_t reps,
                             std::uint64_t seed, TrigConvention convention = TrigConvention::BasisCount,
                             unsigned workers = 1);

}  // namespace levydev
