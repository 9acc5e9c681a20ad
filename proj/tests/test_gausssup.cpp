#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "levydev/gausssup.hpp"
#include "levydev/normal.hpp"
#include "levydev/quadrature.hpp"
#include "levydev/rng.hpp"

using namespace levydev;

namespace {

SupSampleConfig config(BasisFamily fam, double delta, std::size_t reps, std::uint64_t seed, SupMode mode) {
  SupSampleConfig c;
  c.family = fam;
  c.delta = delta;
  c.reps = reps;
  c.seed = seed;
  c.mode = mode;
  return c;
}

}  // namespace

TEST(SampleSup, ConstantBasisIsSymmetric) {
  const auto draws = sample_sup(config(BasisFamily::legendre(0), 1.0, 200'000, 1, SupMode::Signed));
  EXPECT_NEAR(tail_fraction(draws, 0.0).p, 0.5, 4 * std::sqrt(0.25 / 200'000));
}

TEST(SampleSup, HaarMatchesExactLaws) {
  const auto both = sample_sup_both(config(BasisFamily::haar(), 1.0, 1'000'000, 2, SupMode::Signed));
  for (double u : {0.5, 1.0, 2.0, 3.0}) {
    const double ps = haar_exact_signed_tail(1.0, u);
    const double pa = haar_exact_absolute_tail(1.0, u);
    EXPECT_NEAR(tail_fraction(both.signed_sup, u).p, ps, 4 * std::sqrt(ps * (1 - ps) / 1e6)) << u;
    EXPECT_NEAR(tail_fraction(both.absolute_sup, u).p, pa, 4 * std::sqrt(pa * (1 - pa) / 1e6)) << u;
  }
  EXPECT_NEAR(tail_fraction(both.signed_sup, 2.0).p, 0.151114, 0.00143);
}

TEST(SampleSup, DeterministicAcrossRunsAndWorkers) {
  auto c = config(BasisFamily::legendre(3), 0.5, 5000, 42, SupMode::Absolute);
  const auto a = sample_sup(c);
  c.workers = 3;
  const auto b = sample_sup(c);
  EXPECT_EQ(a, b);
  c.seed = 43;
  EXPECT_NE(a, sample_sup(c));
}

TEST(SampleSup, GridPathReproducesClosedFormForSingleHarmonic) {
  auto c = config(BasisFamily::trigonometric(2), 0.7, 2000, 9, SupMode::Signed);
  c.method = SupMethod::Exact;
  const auto exact = sample_sup_both(c);
  c.method = SupMethod::Grid;
  c.grid = 256;
  const auto grid = sample_sup_both(c);
  for (std::size_t r = 0; r < exact.signed_sup.size(); ++r) {
    EXPECT_NEAR(grid.signed_sup[r], exact.signed_sup[r], 1e-9 * (1 + std::abs(exact.signed_sup[r])));
    EXPECT_NEAR(grid.absolute_sup[r], exact.absolute_sup[r], 1e-9 * (1 + exact.absolute_sup[r]));
  }
  c.family = BasisFamily::legendre(2);
  c.method = SupMethod::Exact;
  EXPECT_THROW(sample_sup(c), std::invalid_argument);
}

TEST(SampleSup, GridMatchesDirectMaximisationForLegendre) {
  // Brute-force oracle: maximise the explicit polynomial on a 2^16 grid.
  auto c = config(BasisFamily::legendre(3), 1.0, 200, 5, SupMode::Signed);
  const auto draws = sample_sup_both(c);
  for (std::size_t r = 0; r < 200; ++r) {
    StreamRng rng(5, r);
    std::normal_distribution<double> normal;
    double z[4];
    for (double& v : z) v = normal(rng);
    double hi = -INFINITY, lo = INFINITY;
    for (int i = 0; i <= 1 << 16; ++i) {
      const double x = -1 + 2.0 * i / (1 << 16);
      double v = 0;
      for (int j = 0; j < 4; ++j) v += z[j] * std::sqrt(2.0 * j + 1) * legendre_p(j, x);
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    EXPECT_NEAR(draws.signed_sup[r], hi, 1e-6);
    EXPECT_NEAR(draws.absolute_sup[r], std::max(hi, -lo), 1e-6);
    EXPECT_GE(draws.signed_sup[r], hi - 1e-12);
  }
}

TEST(SampleSup, TrigSingleHarmonicAbsoluteLaw) {
  const auto draws = sample_sup(config(BasisFamily::trigonometric(2), 1.0, 1'000'000, 3, SupMode::Absolute));
  for (double u : {1.0, 3.0, 4.5}) {
    const double p = trig_single_harmonic_exact_absolute_tail(1.0, u);
    EXPECT_NEAR(tail_fraction(draws, u).p, p, 4 * std::sqrt(p * (1 - p) / 1e6)) << u;
  }
}

TEST(SampleSup, GridRefinementIsStable) {
  auto c = config(BasisFamily::legendre(3), 1.0, 200'000, 8, SupMode::Absolute);
  c.normalized = true;
  c.grid = 256;
  const auto coarse = sample_sup(c);
  c.grid = 512;
  const auto fine = sample_sup(c);
  for (double u : {1.5, 2.5}) {
    const auto a = tail_fraction(coarse, u);
    const auto b = tail_fraction(fine, u);
    EXPECT_LT(std::abs(a.p - b.p), a.stderr_);
  }
}

TEST(LegendreProcess, VariancePeaksAtCellEndpoints) {
  for (int J : {1, 2, 3, 5, 8}) {
    const auto fam = BasisFamily::legendre(J);
    std::vector<double> vals(J + 1);
    constexpr int kGrid = 4096;
    int arg = -1;
    double best = -1;
    for (int g = 0; g <= kGrid; ++g) {
      unit_basis_values(fam, static_cast<double>(g) / kGrid, vals);
      double var = 0;
      for (double v : vals) var += v * v;
      if (var > best + 1e-12) {
        best = var;
        arg = g;
      }
    }
    EXPECT_TRUE(arg == 0 || arg == kGrid);
    const double peak = peak_std(fam, 0.3);
    EXPECT_NEAR(best / 0.3 / (peak * peak), 1.0, 1e-12);
    // The normalizing factor is the sqrt(2)/(J+1) of the [-1,1] parametrisation.
    EXPECT_NEAR(1.0 / (peak * std::sqrt(0.3)), kSqrt2 / (J + 1) / kSqrt2, 1e-15);
  }
}

TEST(TailConstants, PublishedReading) {
  const auto trig = tail_constants(BasisFamily::trigonometric(2), TrigConvention::Published);
  EXPECT_EQ(trig.k, 0);
  EXPECT_NEAR(trig.g1, 1.0, 1e-15);
  EXPECT_NEAR(trig.g2, 0.25, 1e-15);
  const auto leg = tail_constants(BasisFamily::legendre(1));
  EXPECT_EQ(leg.k, 1);
  EXPECT_NEAR(leg.g1, 1.5957691, 1e-7);
  EXPECT_NEAR(leg.g2, 0.125, 1e-15);
  const auto haar = tail_constants(BasisFamily::haar());
  EXPECT_EQ(haar.k, 1);
  EXPECT_NEAR(haar.g1, 1.1283792, 1e-7);
  EXPECT_NEAR(haar.g2, 0.25, 1e-15);
}

TEST(TailConstants, BasisCountReading) {
  const auto t2 = tail_constants(BasisFamily::trigonometric(2));
  EXPECT_NEAR(t2.g1, std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(t2.g2, 1.0 / 6.0, 1e-15);
  const auto t4 = tail_constants(BasisFamily::trigonometric(4));
  EXPECT_NEAR(t4.g1, std::sqrt(2.0 * 5.0 / 5.0), 1e-15);
  EXPECT_NEAR(t4.g2, 0.1, 1e-15);
}

TEST(TailConstants, BasisCountLeadingTermIsExactForSingleHarmonic) {
  // For the periodic J=2 cell the tail is sqrt(2/3) e^{-x^2/6} up to terms of
  // order e^{-x^2/2}; the refined formula's extra normal tail is absent.
  const auto tail = tail_constants(BasisFamily::trigonometric(2));
  for (double x : {10.0, 20.0, 40.0}) {
    const double exact = trig_single_harmonic_exact_tail(1.0, x);
    EXPECT_NEAR(exact / asymptotic_tail(tail, 1.0, x, SupMode::Signed).value, 1.0, 1e-9) << x;
    EXPECT_GT(trig_refined_tail(3, 1.0, x) / exact - 1, 0.5 * trig_tau(3, x)) << x;
  }
}

TEST(AsymptoticTail, Examples) {
  const auto trig = tail_constants(BasisFamily::trigonometric(2), TrigConvention::Published);
  const auto t = asymptotic_tail(trig, 0.01, 100, SupMode::Signed);
  EXPECT_NEAR(t.value / std::exp(-25.0), 1.0, 1e-14);
  EXPECT_FALSE(t.low_confidence);
  const auto haar = tail_constants(BasisFamily::haar());
  EXPECT_NEAR(asymptotic_tail(haar, 0.01, 100, SupMode::Signed).value, 1.5672e-12, 2e-16);
  for (const auto& fam : {BasisFamily::haar(), BasisFamily::legendre(2), BasisFamily::trigonometric(4)}) {
    const auto tc = tail_constants(fam);
    EXPECT_DOUBLE_EQ(asymptotic_tail(tc, 0.3, 7, SupMode::Absolute).value,
                     2 * asymptotic_tail(tc, 0.3, 7, SupMode::Signed).value);
  }
  EXPECT_TRUE(asymptotic_tail(haar, 1.0, 2.9, SupMode::Signed).low_confidence);
}

TEST(MScaleTail, Examples) {
  const auto trig = tail_constants(BasisFamily::trigonometric(2), TrigConvention::Published);
  EXPECT_NEAR(m_scale_tail(trig, Window(0, 1), 1, 10, SupMode::Signed).value / std::exp(-25.0), 1.0, 1e-14);
  const auto haar = tail_constants(BasisFamily::haar());
  EXPECT_NEAR(m_scale_tail(haar, Window(0, 1), 100, 50, SupMode::Signed).value, 4.358e-4, 5e-7);
  EXPECT_TRUE(m_scale_tail(haar, Window(0, 1), 100, 29, SupMode::Signed).low_confidence);
}

TEST(MScaleTail, AgreesWithCellScaleFormula) {
  for (const auto& fam : {BasisFamily::haar(), BasisFamily::legendre(3), BasisFamily::trigonometric(2)}) {
    const auto tc = tail_constants(fam);
    const Window w(0.5, 2.0);
    for (int m : {1, 10, 1000}) {
      for (double u : {3.0, 30.0, 300.0}) {
        const double a = m_scale_tail(tc, w, m, u, SupMode::Absolute).value;
        const double b = asymptotic_tail(tc, w.width() / m, u, SupMode::Absolute).value;
        if (b < 1e-290) continue;
        EXPECT_NEAR(a / b, 1.0, 1e-13);
      }
    }
  }
}

TEST(TrigRefined, Examples) {
  EXPECT_NEAR(trig_refined_tail(2, 1.0, 5.0), std::exp(-6.25) + normal_sf(5 / std::sqrt(2.0)), 1e-16);
  EXPECT_NEAR(trig_refined_tail(2, 1.0, 5.0), 2.1340e-3, 1e-7);
  EXPECT_NEAR(trig_refined_tail(BasisFamily::trigonometric(2), 1.0, 5.0, TrigConvention::Published),
              trig_refined_tail(2, 1.0, 5.0), 0.0);
}

TEST(TrigRefined, RelativeGapIsTau) {
  for (int J : {2, 3, 5}) {
    const double c = J == 2 ? 0.5 : (J == 3 ? 1.0 / 3 : 1.0);
    for (double x : {10.0, 20.0, 30.0}) {
      const double lead = std::sqrt(2 * c) * std::exp(-x * x / (2.0 * J));
      const double ratio = trig_refined_tail(J, 1.0, x) / lead;
      const double v2 = x * x / J;
      EXPECT_NEAR((ratio - 1) / trig_tau(J, x), 1.0, 1.5 / v2) << J << " " << x;
    }
  }
}

TEST(SingleHarmonic, DensityNormalisationAndZeroLimit) {
  EXPECT_NEAR(trig_single_harmonic_integral(-INFINITY), 1.0, 1e-10);
  EXPECT_NEAR(trig_single_harmonic_integral(0.0), 0.9082483, 1e-7);
  EXPECT_NEAR(trig_single_harmonic_exact_tail(1.0, 0.0), 0.9082483, 1e-7);
}

TEST(SingleHarmonic, DensityIsConvolutionOfNormalAndRayleigh) {
  // W = Z0/sqrt3 + sqrt(2/3) R: density by direct convolution.
  for (double x : {-1.0, 0.0, 0.7, 2.0, 4.0}) {
    auto f = [x](double r) {
      const double z = std::sqrt(3.0) * (x - std::sqrt(2.0 / 3.0) * r);
      return std::sqrt(3.0) * normal_pdf(z) * r * std::exp(-0.5 * r * r);
    };
    EXPECT_NEAR(trig_single_harmonic_density(x), integrate(f, 0.0, INFINITY, 1e-14), 1e-12) << x;
  }
}

TEST(SingleHarmonic, MatchesMonteCarloOfRotationIdentity) {
  StreamRng rng(11, 0);
  std::normal_distribution<double> normal;
  constexpr int kN = 1'000'000;
  int hits = 0;
  for (int i = 0; i < kN; ++i) {
    const double z0 = normal(rng), z1 = normal(rng), z2 = normal(rng);
    hits += (z0 + std::sqrt(2.0) * std::hypot(z1, z2)) / std::sqrt(3.0) > 2.0;
  }
  const double p = trig_single_harmonic_integral(2.0);
  EXPECT_NEAR(p, 0.1105084, 1e-6);
  EXPECT_NEAR(static_cast<double>(hits) / kN, p, 4 * std::sqrt(p * (1 - p) / kN));
}

TEST(Haar, ExactSignedLaw) {
  EXPECT_DOUBLE_EQ(haar_exact_signed_tail(1.0, 0.0), 0.75);
  const double q = normal_sf(std::sqrt(2.0));
  EXPECT_NEAR(haar_exact_signed_tail(1.0, 2.0), 1 - (1 - q) * (1 - q), 1e-15);
  EXPECT_NEAR(haar_exact_signed_tail(1.0, 2.0), 0.1511134, 1e-7);
  EXPECT_NEAR(haar_exact_signed_tail(4.0, 1.0), haar_exact_signed_tail(1.0, 2.0), 1e-15);
}

TEST(Haar, SignedLawSecondOrderSlope) {
  const auto tc = tail_constants(BasisFamily::haar());
  auto rel = [&](double x) {
    return std::abs(haar_exact_signed_tail(1.0, x) / asymptotic_tail(tc, 1.0, x, SupMode::Signed).value - 1);
  };
  // Least-squares slope of log rel against log x over x in {5, 10, 20}.
  const double lx[3] = {std::log(5.0), std::log(10.0), std::log(20.0)};
  const double ly[3] = {std::log(rel(5)), std::log(rel(10)), std::log(rel(20))};
  const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  EXPECT_NEAR(sxy / sxx, -2.0, 0.15);
  EXPECT_NEAR(std::log(rel(40) / rel(20)) / std::log(2.0), -2.0, 0.05);
}

TEST(Haar, ExactAbsoluteLawMatchesDensityQuadrature) {
  EXPECT_EQ(haar_exact_absolute_tail(1.0, 0.0), 1.0);
  EXPECT_NEAR(haar_exact_absolute_tail(1.0, 2.0), 1 - std::pow(std::erf(1.0), 2), 1e-15);
  EXPECT_NEAR(haar_exact_absolute_tail(1.0, 2.0), 0.2898554, 1e-7);
  // Density (1/pi) e^{-x^2/4} int_{-x}^{x} e^{-v^2/4} dv = (2/sqrt(pi)) e^{-x^2/4} erf(x/2).
  auto density = [](double x) {
    const double inner = integrate([](double v) { return std::exp(-0.25 * v * v); }, -x, x, 1e-15);
    return std::exp(-0.25 * x * x) * inner / kPi;
  };
  for (double u : {0.5, 2.0, 4.0}) {
    EXPECT_NEAR(integrate(density, u, INFINITY, 1e-14), haar_exact_absolute_tail(1.0, u), 1e-10) << u;
  }
  const double q = normal_sf(10 / std::sqrt(2.0));
  EXPECT_NEAR(haar_exact_absolute_tail(1.0, 10.0) / (4 * q), 1.0, 1e-10);
}

TEST(NormalTail, Examples) {
  EXPECT_NEAR(normal_tail(3, 0), 1.4773e-3, 1e-7);
  EXPECT_NEAR(normal_sf(3), 1.3499e-3, 1e-7);
  EXPECT_NEAR(normal_tail(10, 2) / normal_sf(10), 1.0, 3e-4);
  EXPECT_THROW(normal_tail(0.0, 0), std::domain_error);
  EXPECT_THROW(normal_tail(1.0, 1), std::invalid_argument);
  for (double u = 1.0; u < 37.0; u += 0.25) {
    EXPECT_GE(normal_tail(u, 0), normal_sf(u));
    EXPECT_LE(normal_tail(u, 2), normal_sf(u));
  }
}
