#include "levydev/limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

#include "levydev/error.hpp"
#include "levydev/normal.hpp"
#include "levydev/rng.hpp"

namespace levydev {

namespace {

double step_value(const GridCdf& G, double z) {
  const auto it = std::upper_bound(G.x.begin(), G.x.end(), z);
  if (it == G.x.begin()) return 0.0;
  return G.F[static_cast<std::size_t>(it - G.x.begin()) - 1];
}

void require_common_grid(const GridCdf& F, const GridCdf& G) {
  if (F.x != G.x) throw std::invalid_argument("CDF distance: inputs must share one grid");
  if (F.x.empty()) throw std::invalid_argument("CDF distance: empty grid");
}

}  // namespace

LimitLawParams normalization(const BasisFamily& family, const Window& window, int m, TrigConvention convention) {
  if (m < 1) throw std::invalid_argument("normalization: m must be >= 1");
  const TailAsymptotic tail = tail_constants(family, convention);
  const double width = window.width();
  const double h1 = tail.g1 * std::pow(width, -0.5 * tail.k);
  const double h2 = tail.g2 * width;
  if (!(h1 * m > std::exp(1.0))) {
    throw NumericGuardError(fmt::format("normalization needs h1*m > e, got h1*m = {}", h1 * m));
  }
  const double b = std::sqrt(std::log(h1 * m) / h2);
  return {family, window, m, tail.k, h1, h2, 2.0 * h2 * b, b, tail.k / (2.0 * h2) * std::log(b), tail.formula_j};
}

double threshold_u(const LimitLawParams& p, double y) { return y / p.a_m + p.b_m - p.c_m / p.b_m; }

double normalized_y(const LimitLawParams& p, double u) { return p.a_m * (u - p.b_m + p.c_m / p.b_m); }

double gumbel_cdf(double y) { return std::exp(-2.0 * std::exp(-y)); }

std::optional<double> remainder_R(const BasisFamily& family, const Window& window, int m,
                                  TrigConvention convention) {
  if (m < 16) throw std::invalid_argument("remainder_R: m must be >= 16");
  const double log_m = std::log(static_cast<double>(m));
  switch (family.tag()) {
    case Family::Trigonometric: {
      const LimitLawParams p = normalization(family, window, m, convention);
      return std::sqrt(p.formula_j * p.h2 / (2.0 * kPi * window.width() * p.h1 * p.h1)) / std::sqrt(log_m);
    }
    case Family::Haar: {
      const double h2 = tail_constants(family).g2 * window.width();
      return -std::log(log_m) / (4.0 * std::sqrt(h2) * std::sqrt(log_m));
    }
    case Family::Legendre:
      return std::nullopt;
  }
  return std::nullopt;
}

double accompanying_cdf(const LimitLawParams& p, double y, AccompanyingForm form) {
  if (p.family.tag() != Family::Trigonometric) {
    throw std::invalid_argument("accompanying_cdf: defined for the trigonometric family only");
  }
  const double width = p.window.width();
  if (p.formula_j < width) {
    throw std::invalid_argument(
        fmt::format("accompanying_cdf: requires J >= b - a (J = {}, b - a = {})", p.formula_j, width));
  }
  if (y < -std::pow(p.b_m, 1.5)) return 0.0;
  const double log_h1m = std::log(p.h1 * p.m);
  // y + y^2/(4 ln(h1 m)) turns back below y = -2 ln(h1 m) (where u_m < 0); hold it there.
  const double yq = std::max(y, -2.0 * log_h1m);
  double exponent = -2.0 * std::exp(-yq - yq * yq / (4.0 * log_h1m));
  if (form == AccompanyingForm::Stated) {
    exponent -= 2.0 * p.m * normal_sf(threshold_u(p, y) * std::sqrt(width / p.formula_j));
  }
  return std::exp(exponent);
}

double breve_c(double q, int J, double c1, double c2, const Window& window) {
  if (!(q > 0.0) || J < 1 || !(c1 > 0.0) || !(c2 > 0.0)) {
    throw std::invalid_argument("breve_c: q, J, C1, C2 must be positive");
  }
  return q * J * c1 * (c1 + c2) / window.width();
}

BiasConstants BiasConstants::for_family(double q, const BasisFamily& family, const Window& window, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("bias constants: kappa must lie in (0,1)");
  const BoundednessConstants bc = boundedness_constants(family);
  return {q, bc.c1, bc.c2, kappa, family.order(), window};
}

double bias_shift(double n, int m, double kappa, double brevec) {
  if (m < 1) throw std::invalid_argument("bias_shift: m must be >= 1");
  if (!(n >= 1.0)) throw std::invalid_argument("bias_shift: n must be >= 1");
  return brevec * std::pow(n, 1.5 * kappa - 1.0) * std::sqrt(static_cast<double>(m));
}

double accompanying_shifted(const LimitLawParams& p, double y, double n, double kappa, double brevec, int sign,
                            AccompanyingForm form) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("accompanying_shifted: sign must be +1 or -1");
  const double shift = 2.0 * p.h2 * bias_shift(n, p.m, kappa, brevec) * p.b_m;
  return accompanying_cdf(p, y + sign * shift, form);
}

OptimalM optimal_m(double n, double kappa) {
  if (!(n > 1.0)) throw std::invalid_argument("optimal_m: n must exceed 1");
  if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("optimal_m: kappa must lie in (0,1)");
  const double raw = std::round(std::pow(n, 2.0 - 3.0 * kappa));
  const int m = static_cast<int>(std::max(2.0, std::min(raw, 1e9)));
  return {m, kappa > 4.0 / 7.0 && kappa < 2.0 / 3.0};
}

double lambda_n(double n, int m, double kappa) { return m * std::sqrt(std::log(n)) / std::pow(n, 0.5 * kappa); }

GridCdf make_grid_cdf(std::vector<double> x, std::vector<double> F) {
  if (x.size() != F.size() || x.empty()) throw std::invalid_argument("grid CDF: x and F must be nonempty, equal length");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0 && !(x[i] > x[i - 1])) throw std::invalid_argument("grid CDF: x must be strictly increasing");
    if (F[i] < -1e-12 || F[i] > 1.0 + 1e-12 || std::isnan(F[i])) {
      throw std::invalid_argument("grid CDF: values must lie in [0,1]");
    }
    F[i] = std::clamp(F[i], 0.0, 1.0);
    if (i > 0 && F[i] < F[i - 1]) {
      if (F[i] < F[i - 1] - 1e-12) throw std::invalid_argument("grid CDF: values must be nondecreasing");
      F[i] = F[i - 1];
    }
  }
  return {std::move(x), std::move(F)};
}

GridCdf tabulate_cdf(const std::vector<double>& x, const std::function<double(double)>& cdf) {
  std::vector<double> F(x.size());
  std::transform(x.begin(), x.end(), F.begin(), cdf);
  return make_grid_cdf(x, std::move(F));
}

GridCdf empirical_cdf(std::span<const double> sample, const std::vector<double>& x) {
  if (sample.empty()) throw std::invalid_argument("empirical_cdf: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> F(x.size());
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    F[i] = static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x[i]) - sorted.begin()) / n;
  }
  return make_grid_cdf(x, std::move(F));
}

double kolmogorov_distance(const GridCdf& F, const GridCdf& G) {
  require_common_grid(F, G);
  double d = 0.0;
  for (std::size_t i = 0; i < F.x.size(); ++i) d = std::max(d, std::abs(F.F[i] - G.F[i]));
  return d;
}

double levy_distance(const GridCdf& F, const GridCdf& G) {
  require_common_grid(F, G);
  auto corridor_holds = [&](double eps) {
    for (std::size_t i = 0; i < F.x.size(); ++i) {
      if (step_value(G, F.x[i] - eps) - eps > F.F[i] + 1e-15) return false;
      if (F.F[i] > step_value(G, F.x[i] + eps) + eps + 1e-15) return false;
    }
    return true;
  };
  if (corridor_holds(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (corridor_holds(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

double kolmogorov_distance(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("kolmogorov_distance: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double g = cdf(sorted[i]);
    d = std::max({d, (i + 1) / n - g, g - i / n});
  }
  return d;
}

std::vector<GumbelExperimentRow> gumbel_experiment(const GumbelExperimentConfig& config) {
  if (config.ms.empty()) throw std::invalid_argument("gumbel_experiment: empty m list");
  if (config.y_points < 2 || !(config.y_hi > config.y_lo)) {
    throw std::invalid_argument("gumbel_experiment: bad y grid");
  }
  std::vector<double> ygrid(config.y_points);
  for (std::size_t i = 0; i < ygrid.size(); ++i) {
    ygrid[i] = config.y_lo + (config.y_hi - config.y_lo) * static_cast<double>(i) / (ygrid.size() - 1);
  }
  std::vector<GumbelExperimentRow> rows;
  for (int m : config.ms) {
    const LimitLawParams params = normalization(config.family, config.window, m, config.convention);
    SupSampleConfig sup;
    sup.family = config.family;
    sup.delta = config.window.width();
    sup.grid = config.grid;
    sup.reps = config.reps;
    sup.seed = StreamRng(config.seed, static_cast<std::uint64_t>(m))();
    sup.mode = SupMode::Absolute;
    sup.method = config.method;
    sup.workers = config.workers;
    std::vector<double> y = sample_cell_maxima(sup, m);
    for (double& v : y) v = normalized_y(params, v);
    std::sort(y.begin(), y.end());

    GumbelExperimentRow row{m, params, {}, 0.0, 0.0, {}, {}, {}, {}};
    const GridCdf emp = empirical_cdf(y, ygrid);
    row.ks_gumbel = kolmogorov_distance(y, gumbel_cdf);
    row.levy_gumbel = levy_distance(tabulate_cdf(ygrid, gumbel_cdf), emp);
    const bool has_am = params.family.tag() == Family::Trigonometric && params.formula_j >= config.window.width();
    if (has_am) {
      for (AccompanyingForm form : {AccompanyingForm::Stated, AccompanyingForm::Periodic}) {
        auto law = [&](double v) { return accompanying_cdf(params, v, form); };
        const double ks = kolmogorov_distance(y, law);
        const double levy = levy_distance(tabulate_cdf(ygrid, law), emp);
        if (form == AccompanyingForm::Stated) {
          row.ks_accompanying = ks;
          row.levy_accompanying = levy;
        } else {
          row.ks_periodic = ks;
          row.levy_periodic = levy;
        }
      }
    }
    row.y = std::move(y);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace levydev
