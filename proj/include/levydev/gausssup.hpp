#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "levydev/basis.hpp"

namespace levydev {

enum class SupMode { Signed, Absolute };

// Grid: dense grid per cell plus golden-section polish of the grid maximum.
// Exact: closed form, available for Haar and the J=2 trigonometric family.
// Auto: Exact when available, Grid otherwise.
enum class SupMethod { Auto, Grid, Exact };

struct SupSampleConfig {
  BasisFamily family = BasisFamily::haar();
  double delta = 1.0;
  std::size_t grid = 1024;
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  SupMode mode = SupMode::Signed;
  SupMethod method = SupMethod::Auto;
  // Divide the process by its largest standard deviation (for Legendre this
  // is the c = sqrt(2)/(J+1) scaling), making the tail target 2(1 - Phi(u)).
  bool normalized = false;
  unsigned workers = 1;
};

struct SupDraws {
  std::vector<double> signed_sup;
  std::vector<double> absolute_sup;
};

// One cell supremum of sum_j Z_j psi_j per replicate. Replicate r uses
// stream (seed, r), so the output is independent of `workers`.
std::vector<double> sample_sup(const SupSampleConfig& config);
// Signed and absolute suprema from the same Gaussian draws (mode ignored).
SupDraws sample_sup_both(const SupSampleConfig& config);
bool has_exact_sup(const BasisFamily& family);

// Per replicate, the maximum of m independent cell suprema (mode applies
// to each cell). Replicate r uses stream (seed, r).
std::vector<double> sample_cell_maxima(const SupSampleConfig& config, int m);

// Largest pointwise standard deviation of the cell process.
double peak_std(const BasisFamily& family, double delta);

// How "J" in the trigonometric constants is read. The stated formulas match
// the process only when J counts basis functions (J+1 for the even-order
// family); Published plugs the family order in literally.
enum class TrigConvention { BasisCount, Published };

enum class RemainderModel { TrigExplicit, WaveletQuadratic, Unknown };

struct TailAsymptotic {
  BasisFamily family;
  int k;
  double g1;
  double g2;
  RemainderModel remainder;
  // The J used inside the constants (differs from the order for trig under
  // BasisCount).
  double formula_j;
};

TailAsymptotic tail_constants(const BasisFamily& family, TrigConvention convention = TrigConvention::BasisCount);

struct TailValue {
  double value;
  bool low_confidence;  // evaluated outside the asymptotic regime
};

// g1/(sqrt(delta) u)^k exp(-g2 delta u^2), doubled for Absolute.
TailValue asymptotic_tail(const TailAsymptotic& tail, double delta, double u, SupMode mode);
// h1 m^{k/2}/u^k exp(-h2 u^2/m) with h1 = g1 (b-a)^{-k/2}, h2 = g2 (b-a).
TailValue m_scale_tail(const TailAsymptotic& tail, const Window& window, int m, double u, SupMode mode);

// sqrt(2c) exp(-delta u^2/(2J)) + 1 - Phi(u sqrt(delta/J)), c = J^{-1} sum_{j<=J/2} j^2.
double trig_refined_tail(int J, double delta, double u);
double trig_refined_tail(const BasisFamily& family, double delta, double u,
                         TrigConvention convention = TrigConvention::BasisCount);
// tau(x) = sqrt(J) / (2 sqrt(pi c) x), the relative gap between the refined
// and the leading-order trig tails.
double trig_tau(int J, double x);

// Exact tail of the signed supremum for the three-function trigonometric
// cell {1, cos, sin}: the integral of p(x) from u sqrt(delta/3).
double trig_single_harmonic_exact_tail(double delta, double u);
// The density p of sup / sqrt(3/delta).
double trig_single_harmonic_density(double x);
// Same integral with an explicit lower limit (may be -infinity).
double trig_single_harmonic_integral(double lower);
// Exact tail of the absolute supremum |Z0|/sqrt(delta) + sqrt(2/delta) R.
double trig_single_harmonic_exact_absolute_tail(double delta, double u);

double haar_exact_signed_tail(double delta, double u);
double haar_exact_absolute_tail(double delta, double u);

// Mills-ratio expansion of 1 - Phi(u): order 0 is phi(u)/u, order 2
// multiplies by 1 - 1/u^2.
double normal_tail(double u, int order);

struct TailEstimate {
  double p;
  double stderr_;
};

// Fraction of draws strictly above u with its binomial standard error.
TailEstimate tail_fraction(std::span<const double> draws, double u);

}  // namespace levydev
