#include "levydev/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "levydev/normal.hpp"
#include "levydev/quadrature.hpp"

namespace levydev {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

void check_index(const BasisFamily& family, int j) {
  if (j < 0 || j > family.order()) {
    throw std::domain_error("basis index " + std::to_string(j) + " out of range for " + family.name());
  }
}

// P_n and P_n' at x by the three-term recurrence.
void legendre_with_derivative(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  double d0 = 0.0, d1 = 1.0;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    const double d2 = d0 + (2.0 * k + 1.0) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  p = p1;
  dp = d1;
}

double legendre_unit_tv(int j) {
  // Extrema of P_j on [-1,1] located by sign changes of P_j' on a 2^14 grid.
  if (j == 0) return 0.0;
  constexpr int kGrid = 1 << 14;
  auto derivative = [j](double x) {
    double p, dp;
    legendre_with_derivative(j, x, p, dp);
    return dp;
  };
  std::vector<double> extrema{-1.0};
  double x_prev = -1.0;
  double d_prev = derivative(x_prev);
  for (int i = 1; i <= kGrid; ++i) {
    const double x = -1.0 + 2.0 * i / kGrid;
    const double d = derivative(x);
    if (d == 0.0 && i < kGrid) {
      extrema.push_back(x);
    } else if (d_prev * d < 0.0) {
      double lo = x_prev, hi = x;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (derivative(lo) * derivative(mid) <= 0.0) hi = mid; else lo = mid;
      }
      extrema.push_back(0.5 * (lo + hi));
    }
    x_prev = x;
    d_prev = d;
  }
  extrema.push_back(1.0);
  double tv = 0.0;
  for (std::size_t k = 1; k < extrema.size(); ++k) {
    tv += std::abs(legendre_p(j, extrema[k]) - legendre_p(j, extrema[k - 1]));
  }
  return std::sqrt(2.0 * j + 1.0) * tv;
}

}  // namespace

double legendre_p(int n, double x) {
  double p, dp;
  legendre_with_derivative(n, x, p, dp);
  return p;
}

BasisFamily BasisFamily::trigonometric(int J) {
  if (J < 2 || J % 2 != 0) throw std::invalid_argument("trigonometric family needs even J >= 2");
  return BasisFamily(Family::Trigonometric, J);
}

BasisFamily BasisFamily::legendre(int J) {
  if (J < 0) throw std::invalid_argument("legendre family needs J >= 0");
  return BasisFamily(Family::Legendre, J);
}

BasisFamily BasisFamily::haar() { return BasisFamily(Family::Haar, 1); }

BasisFamily BasisFamily::parse(std::string_view name, int J) {
  if (name == "trig" || name == "trigonometric") return trigonometric(J);
  if (name == "legendre") return legendre(J);
  if (name == "haar") return haar();
  throw std::invalid_argument("unknown basis family '" + std::string(name) + "'");
}

std::string BasisFamily::name() const {
  switch (tag_) {
    case Family::Trigonometric: return "trig";
    case Family::Legendre: return "legendre";
    case Family::Haar: return "haar";
  }
  return "?";
}

double BasisFamily::standard_lo() const { return tag_ == Family::Legendre ? -1.0 : 0.0; }

double BasisFamily::standard_hi() const {
  switch (tag_) {
    case Family::Trigonometric: return kTwoPi;
    case Family::Legendre: return 1.0;
    case Family::Haar: return 1.0;
  }
  return 1.0;
}

std::vector<double> BasisFamily::breakpoints() const {
  if (tag_ == Family::Haar) return {0.0, 0.5, 1.0};
  return {0.0, 1.0};
}

Window::Window(double a_, double b_) : a(a_), b(b_) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw std::invalid_argument("window needs finite a < b");
  }
}

BasisSystem::BasisSystem(BasisFamily family, Window window, int m)
    : family_(family), window_(window), m_(m), delta_(0.0) {
  if (m < 1) throw std::invalid_argument("basis system needs m >= 1");
  delta_ = window_.width() / m;
}

double BasisSystem::cell_left(int cell) const {
  if (cell >= m_) return window_.b;
  return window_.a + delta_ * cell;
}

int BasisSystem::cell_of(double x) const {
  if (!(x >= window_.a && x <= window_.b)) return -1;
  int p = static_cast<int>(std::floor((x - window_.a) / delta_));
  p = std::clamp(p, 0, m_ - 1);
  if (p > 0 && x < cell_left(p)) --p;
  if (p + 1 < m_ && x >= cell_left(p + 1)) ++p;
  return p;
}

double standard_basis_eval(const BasisFamily& family, int j, double x) {
  check_index(family, j);
  if (!(x >= family.standard_lo() && x <= family.standard_hi())) {
    throw std::domain_error("standard_basis_eval: x outside the standard interval");
  }
  switch (family.tag()) {
    case Family::Trigonometric: {
      if (j == 0) return 1.0 / std::sqrt(kTwoPi);
      const int freq = (j + 1) / 2;
      const double inv = 1.0 / std::sqrt(kPi);
      return (j % 2 == 1) ? inv * std::cos(freq * x) : inv * std::sin(freq * x);
    }
    case Family::Legendre:
      return std::sqrt((2.0 * j + 1.0) / 2.0) * legendre_p(j, x);
    case Family::Haar:
      if (j == 0) return 1.0;
      return x < 0.5 ? -1.0 : 1.0;
  }
  return 0.0;
}

void unit_basis_values(const BasisFamily& family, double t, std::span<double> out, int piece) {
  const int n = family.size();
  switch (family.tag()) {
    case Family::Trigonometric: {
      out[0] = 1.0;
      const double c = std::cos(kTwoPi * t);
      const double s = std::sin(kTwoPi * t);
      double ck = c, sk = s;
      for (int k = 1; 2 * k <= family.order(); ++k) {
        if (k > 1) {
          // Angle addition keeps the harmonics in step without extra trig calls.
          const double cn = ck * c - sk * s;
          const double sn = sk * c + ck * s;
          ck = cn;
          sk = sn;
        }
        out[2 * k - 1] = kSqrt2 * ck;
        out[2 * k] = kSqrt2 * sk;
      }
      break;
    }
    case Family::Legendre: {
      const double x = 2.0 * t - 1.0;
      double p0 = 1.0, p1 = x;
      out[0] = 1.0;
      if (n > 1) out[1] = std::sqrt(3.0) * x;
      for (int k = 1; k + 1 < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
        out[k + 1] = std::sqrt(2.0 * k + 3.0) * p2;
      }
      break;
    }
    case Family::Haar: {
      out[0] = 1.0;
      const bool right = piece < 0 ? t >= 0.5 : piece == 1;
      out[1] = right ? 1.0 : -1.0;
      break;
    }
  }
}

double local_basis_eval(const BasisSystem& system, int j, double x) {
  check_index(system.family(), j);
  const double a = system.window().a;
  const double hi = system.m() == 1 ? system.window().b : a + system.delta();
  const bool inside = x >= a && (x < hi || (system.m() == 1 && x == hi));
  if (!inside) throw std::domain_error("local_basis_eval: x outside the first cell");
  std::vector<double> out(system.family().size());
  unit_basis_values(system.family(), (x - a) / system.delta(), out);
  return out[j] / std::sqrt(system.delta());
}

double global_basis_eval(const BasisSystem& system, int j, int p, double x) {
  check_index(system.family(), j);
  if (p < 1 || p > system.m()) throw std::domain_error("global_basis_eval: cell index out of range");
  if (system.cell_of(x) != p - 1) return 0.0;
  std::vector<double> out(system.family().size());
  const double t = (x - system.cell_left(p - 1)) / system.delta();
  unit_basis_values(system.family(), std::min(t, 1.0), out);
  return out[j] / std::sqrt(system.delta());
}

double verify_orthonormality(const BasisSystem& system, int quad_order) {
  const BasisFamily& family = system.family();
  const int n = family.size();
  if (family.tag() == Family::Legendre && quad_order < 2 * n) {
    throw std::invalid_argument("verify_orthonormality: Legendre needs quad_order >= 2(J+1)");
  }
  if (quad_order < 1) throw std::invalid_argument("verify_orthonormality: quad_order must be positive");

  // Nodes and weights on [0,1] for one smooth piece.
  std::vector<double> nodes, weights;
  const int per_panel = quad_order <= 64 ? quad_order : 16;
  const int panels = quad_order <= 64 ? 1 : (quad_order + 15) / 16;
  const GaussRule rule = gauss_legendre(per_panel);
  for (int k = 0; k < panels; ++k) {
    for (int i = 0; i < per_panel; ++i) {
      nodes.push_back((k + 0.5 * (rule.nodes[i] + 1.0)) / panels);
      weights.push_back(0.5 * rule.weights[i] / panels);
    }
  }

  const std::vector<double> breaks = family.breakpoints();
  std::vector<double> gram(n * n);
  std::vector<double> vals(n);
  double worst = 0.0;
  for (int p = 1; p <= system.m(); ++p) {
    std::fill(gram.begin(), gram.end(), 0.0);
    const double left = system.cell_left(p - 1);
    for (std::size_t piece = 0; piece + 1 < breaks.size(); ++piece) {
      const double lo = breaks[piece];
      const double len = breaks[piece + 1] - lo;
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double x = left + system.delta() * (lo + len * nodes[q]);
        const double w = system.delta() * len * weights[q];
        for (int j = 0; j < n; ++j) vals[j] = global_basis_eval(system, j, p, x);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) gram[i * n + j] += w * vals[i] * vals[j];
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        worst = std::max(worst, std::abs(gram[i * n + j] - (i == j ? 1.0 : 0.0)));
      }
    }
  }
  return worst;
}

BoundednessConstants boundedness_constants(const BasisFamily& family) {
  switch (family.tag()) {
    case Family::Haar:
      return {1.0, 2.0};
    case Family::Trigonometric:
      // sqrt(2) cos(2 pi k t) runs through k full periods on the unit cell.
      return {kSqrt2, 4.0 * kSqrt2 * (family.order() / 2)};
    case Family::Legendre: {
      double c1 = 0.0, c2 = 0.0;
      for (int j = 0; j <= family.order(); ++j) {
        c1 = std::max(c1, std::sqrt(2.0 * j + 1.0));  // |P_j| peaks at the endpoints
        c2 = std::max(c2, legendre_unit_tv(j));
      }
      return {c1, c2};
    }
  }
  return {0.0, 0.0};
}

BoundednessConstants boundedness_constants(const BasisSystem& system) {
  return boundedness_constants(system.family());
}

}  // namespace levydev
