#include "levydev/bands.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

#include "levydev/parallel.hpp"
#include "levydev/rng.hpp"

namespace levydev {

namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie in (0,1)");
}

void check_window_excludes_zero(const Window& w) {
  if (w.a <= 0.0 && w.b >= 0.0) throw std::invalid_argument("window must exclude 0");
}

}  // namespace

double gumbel_quantile(double level) {
  check_level(level);
  return -std::log(-std::log(level) / 2.0);
}

double accompanying_quantile(const LimitLawParams& params, double level, AccompanyingForm form) {
  check_level(level);
  double lo = -std::pow(params.b_m, 1.5);
  double hi = 1.0;
  while (accompanying_cdf(params, hi, form) < level) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (accompanying_cdf(params, mid, form) < level) lo = mid; else hi = mid;
  }
  return hi;
}

double band_threshold(const LimitLawParams& params, double n, const BiasConstants& bias, const BandOptions& options) {
  const double y = options.quantile == BandQuantile::Gumbel ? gumbel_quantile(options.level)
                                                            : accompanying_quantile(params, options.level);
  return threshold_u(params, y) + bias_shift(n, params.m, bias.kappa, bias.brevec());
}

ConfidenceBand confidence_band(const ProjectionEstimate& est, const BiasConstants& bias, const BandOptions& options) {
  check_level(options.level);
  if (!(options.s_floor > 0.0)) throw std::invalid_argument("confidence_band: s_floor must be positive");
  if (options.points < 2) throw std::invalid_argument("confidence_band: need at least 2 points");
  const double n = static_cast<double>(est.n);
  const double T = est.horizon();
  if (std::abs(std::log(T) - bias.kappa * std::log(n)) > 1e-9) {
    throw std::invalid_argument(fmt::format("confidence_band: T = {} is not n^kappa for kappa = {}", T, bias.kappa));
  }
  const BasisSystem& sys = est.expansion.system();
  const LimitLawParams params = normalization(sys.family(), sys.window(), sys.m(), options.convention);
  const double threshold = band_threshold(params, n, bias, options);
  const double scale = std::sqrt(sys.m() / T) * threshold;

  ConfidenceBand band{{}, {}, {}, {}, options.level, scale, threshold};
  const Window& w = sys.window();
  for (std::size_t i = 0; i < options.points; ++i) {
    const double x = w.a + w.width() * static_cast<double>(i) / (options.points - 1);
    const double s = est.expansion(x);
    const double half = std::sqrt(std::max(s, options.s_floor)) * scale;
    band.x.push_back(x);
    band.estimate.push_back(s);
    band.lower.push_back(std::max(0.0, s - half));
    band.upper.push_back(s + half);
  }
  return band;
}

CoverageReport coverage_experiment(const CoverageConfig& config) {
  if (!(config.kappa > 0.0 && config.kappa < 1.0)) throw std::invalid_argument("coverage: kappa must lie in (0,1)");
  if (config.n < 2) throw std::invalid_argument("coverage: n must be >= 2");
  if (config.reps == 0) throw std::invalid_argument("coverage: reps must be positive");
  if (config.levels.empty()) throw std::invalid_argument("coverage: no levels");
  for (double l : config.levels) check_level(l);
  check_window_excludes_zero(config.window);

  const double n = static_cast<double>(config.n);
  const OptimalM opt = optimal_m(n, config.kappa);
  const int m = config.m.value_or(opt.m);
  if (m < 1) throw std::invalid_argument("coverage: m must be >= 1");
  CoverageReport rep{m, 0, 0, 0, 0, 0, 0, normalization(config.family, config.window, m, config.convention),
                     {}, {}, {}, {}, {}};
  if (!opt.in_regime) {
    rep.warnings.push_back(fmt::format("kappa = {} outside the optimal-m regime (4/7, 2/3)", config.kappa));
  }
  rep.T = std::pow(n, config.kappa);
  rep.delta = rep.T / n;
  rep.lambda_n = lambda_n(n, rep.m, config.kappa);
  if (rep.lambda_n > 0.5) rep.warnings.push_back(fmt::format("Lambda_n = {:.4g} exceeds 0.5", rep.lambda_n));
  rep.q = config.q.value_or(2.0 * fitted_small_time_q(config.model, config.window));
  const BiasConstants bias = BiasConstants::for_family(rep.q, config.family, config.window, config.kappa);
  rep.brevec = bias.brevec();
  rep.shift = config.include_shift ? bias_shift(n, rep.m, config.kappa, rep.brevec) : 0.0;
  rep.levels = config.levels;
  for (double l : config.levels) rep.thresholds.push_back(threshold_u(rep.params, gumbel_quantile(l)) + rep.shift);

  const BasisSystem system(config.family, config.window, rep.m);
  const std::size_t grid = config.grid ? config.grid : min_deviation_grid(system);
  const LevyModel model = config.model;
  auto s = [model](double x) { return levy_density(model, x); };
  const double scale = std::sqrt(rep.T / rep.m);
  rep.statistics.assign(config.reps, 0.0);
  parallel_for(config.reps, config.workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      const std::uint64_t seed = StreamRng(config.seed, r)();
      const IncrementSample sample = sample_increments(model, config.n, rep.delta, seed);
      const ProjectionEstimate est = make_estimate(sample, system);
      rep.statistics[r] = scale * deviation_stat(est, s, s, grid, DeviationMode::AgainstTruth).statistic;
    }
  });
  for (double t : rep.thresholds) {
    const auto covered = std::count_if(rep.statistics.begin(), rep.statistics.end(), [t](double v) { return v <= t; });
    rep.coverage.push_back(static_cast<double>(covered) / static_cast<double>(config.reps));
  }
  return rep;
}

double surrogate_noncoverage(const BasisFamily& family, const Window& window, int m, double level, std::size_t reps,
                             std::uint64_t seed, TrigConvention convention, unsigned workers) {
  const LimitLawParams params = normalization(family, window, m, convention);
  SupSampleConfig sup;
  sup.family = family;
  sup.delta = window.width();
  sup.reps = reps;
  sup.seed = seed;
  sup.mode = SupMode::Absolute;
  sup.workers = workers;
  const std::vector<double> maxima = sample_cell_maxima(sup, m);
  const double u = threshold_u(params, gumbel_quantile(level));
  const auto above = std::count_if(maxima.begin(), maxima.end(), [u](double v) { return v > u; });
  return static_cast<double>(above) / static_cast<double>(reps);
}

}  // namespace levydev
