#include "levydev/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace levydev {

namespace {

void require_window_off_zero(const BasisSystem& system, const char* what) {
  const Window& w = system.window();
  if (w.a <= 0.0 && w.b >= 0.0) {
    throw std::invalid_argument(fmt::format("{}: window [{}, {}] must exclude 0", what, w.a, w.b));
  }
}

// Inward offset (unit coordinates) used for one-sided endpoint values.
constexpr double kEdge = 1e-12;

// Maximizer of a unimodal f on [lo, hi].
template <class F>
double golden_section_max(F&& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

// Coefficients <phi_r, g> for every r, integrating piece by piece.
std::vector<double> inner_products(const RealFn& g, const BasisSystem& system, double abs_tol) {
  const BasisFamily& family = system.family();
  const int n = family.size();
  const std::vector<double> breaks = family.breakpoints();
  const double scale = 1.0 / std::sqrt(system.delta());
  std::vector<double> out(system.dim(), 0.0);
  std::vector<double> vals(n);
  for (int cell = 0; cell < system.m(); ++cell) {
    const double left = system.cell_left(cell);
    for (std::size_t piece = 0; piece + 1 < breaks.size(); ++piece) {
      const double lo = left + system.delta() * breaks[piece];
      const double hi = left + system.delta() * breaks[piece + 1];
      const int piece_id = breaks.size() > 2 ? static_cast<int>(piece) : -1;
      for (int j = 0; j < n; ++j) {
        auto integrand = [&, j](double x) {
          unit_basis_values(family, (x - left) / system.delta(), vals, piece_id);
          return scale * vals[j] * g(x);
        };
        out[system.index(j, cell)] += integrate(integrand, lo, hi, abs_tol, 1e-13);
      }
    }
  }
  return out;
}

}  // namespace

CoefficientExpansion::CoefficientExpansion(BasisSystem system, std::vector<double> coeffs)
    : system_(system), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != static_cast<std::size_t>(system_.dim())) {
    throw std::invalid_argument("coefficient vector length must equal (J+1)*m");
  }
}

double CoefficientExpansion::cell_value(int cell, double t, int piece) const {
  const int n = system_.family().size();
  thread_local std::vector<double> out;
  out.resize(n);
  unit_basis_values(system_.family(), t, out, piece);
  double sum = 0.0;
  const double* c = coeffs_.data() + static_cast<std::size_t>(cell) * n;
  for (int j = 0; j < n; ++j) sum += c[j] * out[j];
  return sum / std::sqrt(system_.delta());
}

double CoefficientExpansion::operator()(double x) const {
  const int cell = system_.cell_of(x);
  if (cell < 0) throw std::domain_error(fmt::format("estimate evaluated outside the window at x = {}", x));
  const double t = std::min((x - system_.cell_left(cell)) / system_.delta(), 1.0);
  return cell_value(cell, t);
}

std::vector<double> estimate_coefficients(std::span<const double> increments, double delta,
                                          const BasisSystem& system) {
  if (increments.empty()) throw std::invalid_argument("estimate_coefficients: empty sample");
  if (!(delta > 0.0)) throw std::invalid_argument("estimate_coefficients: delta must be positive");
  const int n = system.family().size();
  std::vector<double> sum(system.dim(), 0.0);
  std::vector<double> comp(system.dim(), 0.0);
  std::vector<double> vals(n);
  for (double x : increments) {
    const int cell = system.cell_of(x);
    if (cell < 0) continue;
    const double t = std::min((x - system.cell_left(cell)) / system.delta(), 1.0);
    unit_basis_values(system.family(), t, vals);
    for (int j = 0; j < n; ++j) {
      const int r = system.index(j, cell);
      const double v = vals[j];
      const double s = sum[r] + v;
      comp[r] += std::abs(sum[r]) >= std::abs(v) ? (sum[r] - s) + v : (v - s) + sum[r];
      sum[r] = s;
    }
  }
  const double norm = 1.0 / (std::sqrt(system.delta()) * static_cast<double>(increments.size()) * delta);
  for (std::size_t r = 0; r < sum.size(); ++r) sum[r] = (sum[r] + comp[r]) * norm;
  return sum;
}

std::vector<double> estimate_coefficients(const IncrementSample& sample, const BasisSystem& system) {
  return estimate_coefficients(sample.values, sample.delta, system);
}

ProjectionEstimate make_estimate(const IncrementSample& sample, const BasisSystem& system) {
  return {CoefficientExpansion(system, estimate_coefficients(sample, system)), sample.n(), sample.delta};
}

double evaluate_estimate(const ProjectionEstimate& est, double x) { return est.expansion(x); }

CoefficientExpansion project(const RealFn& f, const BasisSystem& system, double abs_tol) {
  return CoefficientExpansion(system, inner_products(f, system, abs_tol));
}

CoefficientExpansion projection_truth(const LevyModel& model, const BasisSystem& system) {
  require_window_off_zero(system, "projection_truth");
  if (system.window().b < 0.0) return CoefficientExpansion(system, std::vector<double>(system.dim(), 0.0));
  return project([&](double x) { return levy_density(model, x); }, system, 1e-12);
}

CoefficientExpansion expected_estimate(const LevyModel& model, const BasisSystem& system, double delta) {
  require_window_off_zero(system, "expected_estimate");
  if (!(delta > 0.0)) throw std::invalid_argument("expected_estimate: delta must be positive");
  auto f = [&](double x) { return transition_density(model, delta, x) / delta; };
  return CoefficientExpansion(system, inner_products(f, system, 1e-12));
}

std::size_t min_deviation_grid(const BasisSystem& system) {
  return 16u * static_cast<std::size_t>(system.m()) * system.family().size();
}

DeviationReport deviation_stat(const CoefficientExpansion& est, const RealFn& reference, const RealFn& s,
                               std::size_t grid, DeviationMode mode) {
  const BasisSystem& system = est.system();
  if (grid < min_deviation_grid(system)) {
    throw std::invalid_argument(
        fmt::format("deviation_stat: grid {} below 16*m*(J+1) = {}", grid, min_deviation_grid(system)));
  }
  const std::vector<double> breaks = system.family().breakpoints();
  const std::size_t pieces = breaks.size() - 1;
  std::size_t per_piece = std::max<std::size_t>(2, (grid + system.m() * pieces - 1) / (system.m() * pieces));

  // Grid scan of each piece; every interior grid peak is then polished by
  // golden-section search, so a peak between grid points cannot hide behind
  // an endpoint value that stays put under doubling.
  auto scan = [&](std::size_t g, double& arg) {
    double best = -1.0;
    std::vector<double> vals(g + 1);
    for (int cell = 0; cell < system.m(); ++cell) {
      const double left = system.cell_left(cell);
      for (std::size_t piece = 0; piece < pieces; ++piece) {
        const double lo = breaks[piece] + kEdge;
        const double hi = breaks[piece + 1] - kEdge;
        const int piece_id = pieces > 1 ? static_cast<int>(piece) : -1;
        auto weighted = [&](double t) {
          const double x = left + system.delta() * t;
          const double sx = s(x);
          if (!(sx > 0.0) || !std::isfinite(sx)) {
            throw std::domain_error(fmt::format("deviation_stat: s must be positive on D, s({}) = {}", x, sx));
          }
          return std::abs(est.cell_value(cell, t, piece_id) - reference(x)) / std::sqrt(sx);
        };
        auto consider = [&](double t, double v) {
          if (v > best) {
            best = v;
            arg = left + system.delta() * t;
          }
        };
        const double step = (hi - lo) / static_cast<double>(g);
        for (std::size_t i = 0; i <= g; ++i) {
          vals[i] = weighted(lo + step * static_cast<double>(i));
          consider(lo + step * static_cast<double>(i), vals[i]);
        }
        for (std::size_t i = 1; i < g; ++i) {
          if (vals[i] < vals[i - 1] || vals[i] < vals[i + 1]) continue;
          const double t = golden_section_max(weighted, lo + step * (i - 1.0), lo + step * (i + 1.0));
          consider(t, weighted(t));
        }
      }
    }
    return best;
  };

  constexpr std::size_t kMaxPerPiece = std::size_t{1} << 20;
  double arg = system.window().a;
  double stat = scan(per_piece, arg);
  while (per_piece < kMaxPerPiece) {
    double next_arg = arg;
    const double next = scan(2 * per_piece, next_arg);
    per_piece *= 2;
    const bool converged = std::abs(next - stat) <= 1e-6 * std::abs(next);
    stat = next;
    arg = next_arg;
    if (converged) break;
  }
  return {stat, std::clamp(arg, system.window().a, system.window().b),
          system.m() * pieces * (per_piece + 1), mode};
}

DeviationReport deviation_stat(const ProjectionEstimate& est, const RealFn& reference, const RealFn& s,
                               std::size_t grid, DeviationMode mode) {
  return deviation_stat(est.expansion, reference, s, grid, mode);
}

}  // namespace levydev
