#include "levydev/levy.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <fmt/core.h>

#include "levydev/parallel.hpp"
#include "levydev/quadrature.hpp"
#include "levydev/rng.hpp"
#include "levydev/special.hpp"

namespace levydev {

namespace {

void require_positive_x(double x, const char* what) {
  if (!(x > 0.0)) throw std::domain_error(fmt::format("{}: x must be positive, got {}", what, x));
}

void require_positive_param(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(fmt::format("Levy model parameter {} must be finite and positive", what));
  }
}

// Poisson-mixture of Gamma(k, eta) densities, k >= 1, truncated once the
// remaining Poisson mass drops below 1e-12.
double compound_poisson_density(const CompoundPoissonExp& cp, double delta, double x) {
  const double mean = cp.lambda * delta;
  const double log_mean = std::log(mean);
  const double log_eta_x = std::log(cp.eta * x);
  double remaining = -std::expm1(-mean);  // P{N >= 1}
  double sum = 0.0;
  for (int k = 1; k < 100000; ++k) {
    const double log_pois = -mean + k * log_mean - std::lgamma(k + 1.0);
    const double log_gamma_density = std::log(cp.eta) + (k - 1) * log_eta_x - cp.eta * x - std::lgamma(k);
    sum += std::exp(log_pois + log_gamma_density);
    remaining -= std::exp(log_pois);
    if (remaining < 1e-12 && k > mean) break;
  }
  return sum;
}

}  // namespace

LevyModel LevyModel::compound_poisson_exp(double lambda, double eta) {
  require_positive_param(lambda, "lambda");
  require_positive_param(eta, "eta");
  return LevyModel(CompoundPoissonExp{lambda, eta});
}

LevyModel LevyModel::gamma(double c, double rho) {
  require_positive_param(c, "c");
  require_positive_param(rho, "rho");
  return LevyModel(GammaProcess{c, rho});
}

std::string LevyModel::name() const { return is_compound_poisson() ? "compound_poisson_exp" : "gamma"; }

double levy_density(const LevyModel& model, double x) {
  require_positive_x(x, "levy_density");
  if (const auto* cp = std::get_if<CompoundPoissonExp>(&model.params())) {
    return cp->lambda * cp->eta * std::exp(-cp->eta * x);
  }
  const auto& g = std::get<GammaProcess>(model.params());
  return g.c * std::exp(-g.rho * x) / x;
}

double levy_tail(const LevyModel& model, double x) {
  require_positive_x(x, "levy_tail");
  if (const auto* cp = std::get_if<CompoundPoissonExp>(&model.params())) {
    return cp->lambda * std::exp(-cp->eta * x);
  }
  const auto& g = std::get<GammaProcess>(model.params());
  return g.c * expint_e1(g.rho * x);
}

IncrementSample sample_increments(const LevyModel& model, std::size_t n, double delta, std::uint64_t seed,
                                  unsigned workers) {
  if (n == 0) throw std::invalid_argument("sample_increments: n must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("sample_increments: delta must be positive");
  IncrementSample out{model, delta, seed, std::vector<double>(n)};
  parallel_for(n, workers, [&](std::size_t lo, std::size_t hi) {
    if (const auto* cp = std::get_if<CompoundPoissonExp>(&model.params())) {
      for (std::size_t k = lo; k < hi; ++k) {
        StreamRng rng(seed, k);
        std::poisson_distribution<long> jumps(cp->lambda * delta);
        const long count = jumps(rng);
        double x = 0.0;
        if (count > 0) {
          std::gamma_distribution<double> size(static_cast<double>(count), 1.0 / cp->eta);
          x = size(rng);
        }
        out.values[k] = x;
      }
    } else {
      const auto& g = std::get<GammaProcess>(model.params());
      for (std::size_t k = lo; k < hi; ++k) {
        StreamRng rng(seed, k);
        std::gamma_distribution<double> draw(g.c * delta, 1.0 / g.rho);
        out.values[k] = draw(rng);
      }
    }
  });
  return out;
}

double transition_density(const LevyModel& model, double delta, double x) {
  if (!(delta > 0.0)) throw std::invalid_argument("transition_density: delta must be positive");
  if (!(x > 0.0)) return 0.0;
  if (const auto* cp = std::get_if<CompoundPoissonExp>(&model.params())) {
    return compound_poisson_density(*cp, delta, x);
  }
  const auto& g = std::get<GammaProcess>(model.params());
  const double shape = g.c * delta;
  return std::exp((shape - 1.0) * std::log(x) + shape * std::log(g.rho) - g.rho * x - std::lgamma(shape));
}

double transition_atom(const LevyModel& model, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("transition_atom: delta must be positive");
  if (const auto* cp = std::get_if<CompoundPoissonExp>(&model.params())) {
    return std::exp(-cp->lambda * delta);
  }
  return 0.0;
}

double transition_tail(const LevyModel& model, double delta, double x) {
  require_positive_x(x, "transition_tail");
  auto f = [&](double u) { return transition_density(model, delta, u); };
  return integrate(f, x, std::numeric_limits<double>::infinity(), 1e-14 * delta, 1e-13);
}

double small_time_check(const LevyModel& model, const Window& window, double delta, int grid) {
  if (!(window.a > 0.0)) throw std::invalid_argument("small_time_check: window must lie in (0, inf)");
  if (grid < 2) throw std::invalid_argument("small_time_check: grid must be >= 2");
  auto f = [&](double u) { return transition_density(model, delta, u); };
  // Accumulate P{X >= x} from the right so each grid segment is integrated once.
  double tail = transition_tail(model, delta, window.b);
  double worst = 0.0;
  for (int i = grid - 1; i >= 0; --i) {
    const double x = window.a + window.width() * i / (grid - 1);
    if (i < grid - 1) {
      const double next = window.a + window.width() * (i + 1) / (grid - 1);
      tail += integrate(f, x, next, 1e-14 * delta, 1e-13);
    }
    worst = std::max(worst, std::abs(tail / delta - levy_tail(model, x)));
  }
  return worst;
}

double fitted_small_time_q(const LevyModel& model, const Window& window, int grid) {
  double q = 0.0;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    q = std::max(q, small_time_check(model, window, delta, grid) / delta);
  }
  return q;
}

}  // namespace levydev
