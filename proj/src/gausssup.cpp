#include "levydev/gausssup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "levydev/normal.hpp"
#include "levydev/parallel.hpp"
#include "levydev/quadrature.hpp"
#include "levydev/rng.hpp"

namespace levydev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sum_of_squares_to(int upper) {
  double c = 0.0;
  for (int j = 1; j <= upper; ++j) c += static_cast<double>(j) * j;
  return c;
}

// Samples cell suprema for one configuration.
class CellSampler {
 public:
  explicit CellSampler(const SupSampleConfig& cfg)
      : family_(cfg.family), n_(cfg.family.size()), exact_(use_exact(cfg)) {
    if (!(cfg.delta > 0.0)) throw std::invalid_argument("sample_sup: delta must be positive");
    if (cfg.reps < 1) throw std::invalid_argument("sample_sup: reps must be >= 1");
    scale_ = 1.0 / std::sqrt(cfg.delta);
    if (cfg.normalized) scale_ /= peak_std(cfg.family, cfg.delta);
    if (exact_) return;
    if (cfg.grid < 2) throw std::invalid_argument("sample_sup: grid must be >= 2");
    periodic_ = family_.tag() == Family::Trigonometric;
    points_ = cfg.grid;
    table_.resize(points_ * n_);
    std::vector<double> vals(n_);
    for (std::size_t g = 0; g < points_; ++g) {
      unit_basis_values(family_, position(g), vals);
      for (int j = 0; j < n_; ++j) table_[g * n_ + j] = scale_ * vals[j];
    }
  }

  int size() const { return n_; }

  void sup(const double* z, double& signed_sup, double& absolute_sup) const {
    if (exact_) {
      exact_sup(z, signed_sup, absolute_sup);
      return;
    }
    double hi = -kInf, lo = kInf;
    std::size_t arg_hi = 0, arg_lo = 0;
    for (std::size_t g = 0; g < points_; ++g) {
      const double* row = &table_[g * n_];
      double v = 0.0;
      for (int j = 0; j < n_; ++j) v += z[j] * row[j];
      if (v > hi) {
        hi = v;
        arg_hi = g;
      }
      if (v < lo) {
        lo = v;
        arg_lo = g;
      }
    }
    signed_sup = std::max(hi, polish(z, arg_hi, 1.0));
    const double neg = std::max(-lo, polish(z, arg_lo, -1.0));
    absolute_sup = std::max(signed_sup, neg);
  }

 private:
  static bool use_exact(const SupSampleConfig& cfg) {
    if (cfg.family.tag() == Family::Haar) return true;
    switch (cfg.method) {
      case SupMethod::Grid: return false;
      case SupMethod::Exact:
        if (!has_exact_sup(cfg.family)) throw std::invalid_argument("sample_sup: no closed form for this family");
        return true;
      case SupMethod::Auto: return has_exact_sup(cfg.family);
    }
    return false;
  }

  double position(std::size_t g) const {
    return periodic_ ? static_cast<double>(g) / points_ : static_cast<double>(g) / (points_ - 1);
  }

  double value_at(const double* z, double t) const {
    double vals[64];
    unit_basis_values(family_, t, std::span<double>(vals, n_));
    double v = 0.0;
    for (int j = 0; j < n_; ++j) v += z[j] * vals[j];
    return scale_ * v;
  }

  // Golden-section maximum of sign * process around grid point g.
  double polish(const double* z, std::size_t g, double sign) const {
    const double step = periodic_ ? 1.0 / points_ : 1.0 / (points_ - 1);
    double a = position(g) - step;
    double b = position(g) + step;
    if (!periodic_) {
      a = std::max(a, 0.0);
      b = std::min(b, 1.0);
    }
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    double f1 = sign * value_at(z, x1), f2 = sign * value_at(z, x2);
    while (b - a > 1e-9 * step) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = sign * value_at(z, x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = sign * value_at(z, x1);
      }
    }
    return std::max(f1, f2);
  }

  void exact_sup(const double* z, double& signed_sup, double& absolute_sup) const {
    if (family_.tag() == Family::Haar) {
      signed_sup = scale_ * (z[0] + std::abs(z[1]));
      absolute_sup = scale_ * (std::abs(z[0]) + std::abs(z[1]));
      return;
    }
    // 1 + sqrt2 (Z1 cos + Z2 sin) peaks at sqrt2 |(Z1, Z2)|.
    const double r = kSqrt2 * std::hypot(z[1], z[2]);
    signed_sup = scale_ * (z[0] + r);
    absolute_sup = scale_ * (std::abs(z[0]) + r);
  }

  BasisFamily family_;
  int n_;
  bool exact_;
  bool periodic_ = false;
  double scale_ = 1.0;
  std::size_t points_ = 0;
  std::vector<double> table_;
};

}  // namespace

bool has_exact_sup(const BasisFamily& family) {
  return family.tag() == Family::Haar ||
         (family.tag() == Family::Trigonometric && family.order() == 2);
}

double peak_std(const BasisFamily& family, double delta) {
  switch (family.tag()) {
    case Family::Trigonometric: return std::sqrt((family.order() + 1.0) / delta);
    case Family::Legendre: return (family.order() + 1.0) / std::sqrt(delta);
    case Family::Haar: return std::sqrt(2.0 / delta);
  }
  return 1.0;
}

SupDraws sample_sup_both(const SupSampleConfig& config) {
  if (config.family.size() > 64) throw std::invalid_argument("sample_sup: at most 64 basis functions");
  const CellSampler sampler(config);
  SupDraws out{std::vector<double>(config.reps), std::vector<double>(config.reps)};
  parallel_for(config.reps, config.workers, [&](std::size_t lo, std::size_t hi) {
    double z[64];
    for (std::size_t r = lo; r < hi; ++r) {
      StreamRng rng(config.seed, r);
      std::normal_distribution<double> normal;
      for (int j = 0; j < sampler.size(); ++j) z[j] = normal(rng);
      sampler.sup(z, out.signed_sup[r], out.absolute_sup[r]);
    }
  });
  return out;
}

std::vector<double> sample_cell_maxima(const SupSampleConfig& config, int m) {
  if (m < 1) throw std::invalid_argument("sample_cell_maxima: m must be >= 1");
  if (config.family.size() > 64) throw std::invalid_argument("sample_sup: at most 64 basis functions");
  const CellSampler sampler(config);
  std::vector<double> out(config.reps);
  const bool absolute = config.mode == SupMode::Absolute;
  parallel_for(config.reps, config.workers, [&](std::size_t lo, std::size_t hi) {
    double z[64];
    for (std::size_t r = lo; r < hi; ++r) {
      StreamRng rng(config.seed, r);
      std::normal_distribution<double> normal;
      double best = -kInf;
      for (int cell = 0; cell < m; ++cell) {
        for (int j = 0; j < sampler.size(); ++j) z[j] = normal(rng);
        double s, a;
        sampler.sup(z, s, a);
        best = std::max(best, absolute ? a : s);
      }
      out[r] = best;
    }
  });
  return out;
}

std::vector<double> sample_sup(const SupSampleConfig& config) {
  SupDraws both = sample_sup_both(config);
  return config.mode == SupMode::Signed ? std::move(both.signed_sup) : std::move(both.absolute_sup);
}

TailAsymptotic tail_constants(const BasisFamily& family, TrigConvention convention) {
  switch (family.tag()) {
    case Family::Trigonometric: {
      const int J = convention == TrigConvention::BasisCount ? family.order() + 1 : family.order();
      const double c = sum_of_squares_to(J / 2) / J;
      return {family, 0, std::sqrt(2.0 * c), 1.0 / (2.0 * J), RemainderModel::TrigExplicit,
              static_cast<double>(J)};
    }
    case Family::Legendre: {
      const double J1 = family.order() + 1.0;
      return {family, 1, kSqrt2 * J1 / std::sqrt(kPi), 1.0 / (2.0 * J1 * J1), RemainderModel::Unknown,
              static_cast<double>(family.order())};
    }
    case Family::Haar:
      return {family, 1, 2.0 / std::sqrt(kPi), 0.25, RemainderModel::WaveletQuadratic, 1.0};
  }
  throw std::logic_error("unreachable");
}

TailValue asymptotic_tail(const TailAsymptotic& tail, double delta, double u, SupMode mode) {
  if (!(delta > 0.0)) throw std::invalid_argument("asymptotic_tail: delta must be positive");
  const double x = std::sqrt(delta) * u;
  double v = tail.g1 * std::exp(-tail.g2 * x * x);
  if (tail.k == 1) v /= x;
  if (mode == SupMode::Absolute) v *= 2.0;
  return {v, !(x >= 3.0)};
}

TailValue m_scale_tail(const TailAsymptotic& tail, const Window& window, int m, double u, SupMode mode) {
  if (m < 1) throw std::invalid_argument("m_scale_tail: m must be >= 1");
  const double h1 = tail.g1 * std::pow(window.width(), -0.5 * tail.k);
  const double h2 = tail.g2 * window.width();
  double v = h1 * std::exp(-h2 * u * u / m);
  if (tail.k == 1) v *= std::sqrt(static_cast<double>(m)) / u;
  if (mode == SupMode::Absolute) v *= 2.0;
  return {v, !(u * std::sqrt(window.width() / m) >= 3.0)};
}

double trig_refined_tail(int J, double delta, double u) {
  if (J < 1) throw std::invalid_argument("trig_refined_tail: J must be >= 1");
  const double c = sum_of_squares_to(J / 2) / J;
  return std::sqrt(2.0 * c) * std::exp(-delta * u * u / (2.0 * J)) + normal_sf(u * std::sqrt(delta / J));
}

double trig_refined_tail(const BasisFamily& family, double delta, double u, TrigConvention convention) {
  if (family.tag() != Family::Trigonometric) throw std::invalid_argument("trig_refined_tail: trig family only");
  return trig_refined_tail(static_cast<int>(tail_constants(family, convention).formula_j), delta, u);
}

double trig_tau(int J, double x) {
  const double c = sum_of_squares_to(J / 2) / J;
  return std::sqrt(static_cast<double>(J)) / (2.0 * std::sqrt(kPi * c) * x);
}

double trig_single_harmonic_density(double x) {
  return std::sqrt(2.0 / 3.0) * x * std::exp(-0.5 * x * x) * normal_cdf(kSqrt2 * x) +
         std::exp(-1.5 * x * x) / std::sqrt(6.0 * kPi);
}

double trig_single_harmonic_integral(double lower) {
  return integrate(trig_single_harmonic_density, lower, kInf, 0.0, 1e-12);
}

double trig_single_harmonic_exact_tail(double delta, double u) {
  return trig_single_harmonic_integral(u * std::sqrt(delta / 3.0));
}

double trig_single_harmonic_exact_absolute_tail(double delta, double u) {
  // P{|Z0| + sqrt2 R > s} with P{sqrt2 R > y} = exp(-y^2/4).
  const double s = u * std::sqrt(delta);
  if (s <= 0.0) return 1.0;
  auto f = [s](double z) { return 2.0 * normal_pdf(z) * std::exp(-0.25 * (s - z) * (s - z)); };
  return 2.0 * normal_sf(s) + integrate(f, 0.0, s, 1e-15);
}

double haar_exact_signed_tail(double delta, double u) {
  // 1 - Phi^2 = Q (2 - Q) without cancellation.
  const double q = normal_sf(u * std::sqrt(delta) / kSqrt2);
  return q * (2.0 - q);
}

double haar_exact_absolute_tail(double delta, double u) {
  if (u <= 0.0) return 1.0;
  // 1 - (2 Phi - 1)^2 = 4 Q (1 - Q).
  const double q = normal_sf(u * std::sqrt(delta) / kSqrt2);
  return 4.0 * q * (1.0 - q);
}

double normal_tail(double u, int order) {
  if (!(u > 0.0)) throw std::domain_error("normal_tail: the expansion needs u > 0");
  const double lead = normal_pdf(u) / u;
  if (order == 0) return lead;
  if (order == 2) return lead * (1.0 - 1.0 / (u * u));
  throw std::invalid_argument("normal_tail: order must be 0 or 2");
}

TailEstimate tail_fraction(std::span<const double> draws, double u) {
  if (draws.empty()) throw std::invalid_argument("tail_fraction: no draws");
  const auto hits = std::count_if(draws.begin(), draws.end(), [u](double v) { return v > u; });
  const double n = static_cast<double>(draws.size());
  const double p = static_cast<double>(hits) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

}  // namespace levydev
