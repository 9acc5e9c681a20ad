#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "levydev/estimator.hpp"

using namespace levydev;

namespace {

double exact_levy_e1_band(double lo, double hi) {
  return boost::math::expint(1, lo) - boost::math::expint(1, hi);
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST(Coefficients, HandExample) {
  const BasisSystem sys(BasisFamily::haar(), Window(0, 1), 1);
  const std::vector<double> x{0.5, 2.0, 0.3};
  const auto beta = estimate_coefficients(x, 0.1, sys);
  EXPECT_NEAR(beta[0], 2.0 / 0.3, 1e-12);
  // 0.5 sits on the right half (+1), 0.3 on the left half (-1).
  EXPECT_NEAR(beta[1], 0.0, 1e-12);
}

TEST(Coefficients, OutsideWindowContributesNothing) {
  const BasisSystem sys(BasisFamily::legendre(3), Window(0.5, 1.5), 4);
  const std::vector<double> x{0.0, 0.1, 1.6, 7.0, -2.0};
  for (double b : estimate_coefficients(x, 0.01, sys)) EXPECT_EQ(b, 0.0);
  EXPECT_THROW(estimate_coefficients(std::vector<double>{}, 0.1, sys), std::invalid_argument);
}

TEST(Coefficients, ConstantBasisRecoversLevyMass) {
  const auto model = LevyModel::compound_poisson_exp(2, 1);
  const BasisSystem sys(BasisFamily::legendre(0), Window(0.5, 1.5), 1);
  const double delta = 1e-3;
  const auto sample = sample_increments(model, 1'000'000, delta, 77);
  const double beta = estimate_coefficients(sample, sys)[0];
  const double target = 2 * (std::exp(-0.5) - std::exp(-1.5));
  EXPECT_NEAR(target, 0.7668010, 1e-7);
  const double p = target * delta;
  const double se = std::sqrt(p / 1e6) / delta;
  // Small-time bias: |P{X in D}/delta - nu(D)| is O(delta).
  EXPECT_NEAR(beta, target, 4 * se + 2 * fitted_small_time_q(model, Window(0.5, 1.5), 101) * delta);
}

TEST(Evaluate, Examples) {
  const BasisSystem haar(BasisFamily::haar(), Window(0, 1), 1);
  const ProjectionEstimate zero{CoefficientExpansion(haar, {0.0, 0.0}), 10, 0.1};
  EXPECT_EQ(evaluate_estimate(zero, 0.3), 0.0);
  const ProjectionEstimate h{CoefficientExpansion(haar, {1.0, 1.0}), 10, 0.1};
  EXPECT_DOUBLE_EQ(evaluate_estimate(h, 0.75), 2.0);
  EXPECT_DOUBLE_EQ(evaluate_estimate(h, 0.25), 0.0);
  EXPECT_THROW(evaluate_estimate(h, 1.2), std::domain_error);

  const BasisSystem flat(BasisFamily::legendre(0), Window(0, 1), 1);
  const ProjectionEstimate c{CoefficientExpansion(flat, {2.0}), 10, 0.1};
  for (double x : {0.0, 0.3, 1.0}) EXPECT_DOUBLE_EQ(evaluate_estimate(c, x), 2.0);
  EXPECT_THROW(CoefficientExpansion(flat, {1.0, 2.0}), std::invalid_argument);
}

TEST(Projection, ConstantsAreInEverySpan) {
  for (const auto& fam : {BasisFamily::haar(), BasisFamily::legendre(0), BasisFamily::legendre(3),
                          BasisFamily::trigonometric(2), BasisFamily::trigonometric(6)}) {
    const BasisSystem sys(fam, Window(0.5, 1.5), 5);
    const auto proj = project([](double) { return 2.5; }, sys);
    for (int i = 0; i <= 100; ++i) EXPECT_NEAR(proj(0.5 + i / 100.0), 2.5, 1e-9) << fam.name();
  }
}

TEST(Projection, LinearFunctionsInLegendreSpan) {
  const BasisSystem sys(BasisFamily::legendre(1), Window(-1, 1), 1);
  const auto proj = project([](double x) { return x; }, sys);
  for (int i = 0; i <= 40; ++i) {
    const double x = -1 + i / 20.0;
    EXPECT_NEAR(proj(x), x, 1e-9);
  }
}

TEST(Projection, GammaHaarCoefficientMatchesExpIntegral) {
  const BasisSystem sys(BasisFamily::haar(), Window(0.5, 1.5), 2);
  const auto truth = projection_truth(LevyModel::gamma(1, 1), sys);
  EXPECT_NEAR(truth.coeffs()[0], exact_levy_e1_band(0.5, 1.0) / std::sqrt(0.5), 1e-10);
  EXPECT_NEAR(truth.coeffs()[1],
              (exact_levy_e1_band(0.75, 1.0) - exact_levy_e1_band(0.5, 0.75)) / std::sqrt(0.5), 1e-10);
  EXPECT_THROW(projection_truth(LevyModel::gamma(1, 1), BasisSystem(BasisFamily::haar(), Window(0, 1), 2)),
               std::invalid_argument);
}

TEST(ExpectedEstimate, ConstantBasisIsWindowProbability) {
  const auto model = LevyModel::gamma(1, 1);
  const BasisSystem sys(BasisFamily::legendre(0), Window(0.5, 2.5), 1);
  for (double delta : {1e-3, 0.1}) {
    const double prob = boost::math::gamma_p(delta, 2.5) - boost::math::gamma_p(delta, 0.5);
    EXPECT_NEAR(expected_estimate(model, sys, delta).coeffs()[0], prob / delta / std::sqrt(2.0), 1e-9);
  }
}

TEST(ExpectedEstimate, ApproachesProjectionAsDeltaShrinks) {
  const auto model = LevyModel::gamma(1, 1);
  const BasisSystem sys(BasisFamily::legendre(2), Window(0.5, 1.5), 4);
  const auto truth = projection_truth(model, sys);
  double prev = INFINITY;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    const auto mean = expected_estimate(model, sys, delta);
    const auto rep = deviation_stat(mean, truth, [](double) { return 1.0; }, min_deviation_grid(sys),
                                    DeviationMode::AgainstExpectation);
    EXPECT_LT(rep.statistic, prev);
    EXPECT_LT(rep.statistic, 10 * delta);
    prev = rep.statistic;
  }
}

TEST(ExpectedEstimate, MatchesMonteCarloAverage) {
  const auto model = LevyModel::compound_poisson_exp(1, 1);
  const BasisSystem sys(BasisFamily::haar(), Window(0.5, 1.5), 4);
  const double delta = 1e-3;
  const auto mean = expected_estimate(model, sys, delta);
  constexpr int kReps = 200;
  std::vector<double> sum(17, 0.0), sq(17, 0.0);
  for (int r = 0; r < kReps; ++r) {
    const auto est = make_estimate(sample_increments(model, 100'000, delta, 1000 + r), sys);
    for (int i = 0; i < 17; ++i) {
      const double v = evaluate_estimate(est, 0.5 + i / 16.0);
      sum[i] += v;
      sq[i] += v * v;
    }
  }
  for (int i = 0; i < 17; ++i) {
    const double avg = sum[i] / kReps;
    const double sd = std::sqrt((sq[i] / kReps - avg * avg) * kReps / (kReps - 1));
    EXPECT_NEAR(avg, mean(0.5 + i / 16.0), 4 * sd / std::sqrt(kReps)) << "x=" << 0.5 + i / 16.0;
  }
}

TEST(Coefficients, UnbiasedOverReplications) {
  const auto model = LevyModel::gamma(1, 1);
  const BasisSystem sys(BasisFamily::legendre(2), Window(0.5, 1.5), 3);
  const double delta = 0.01;
  const auto target = expected_estimate(model, sys, delta).coeffs();
  constexpr int kReps = 500;
  std::vector<double> sum(sys.dim(), 0.0), sq(sys.dim(), 0.0);
  for (int r = 0; r < kReps; ++r) {
    const auto beta = estimate_coefficients(sample_increments(model, 5000, delta, 5000 + r), sys);
    for (int k = 0; k < sys.dim(); ++k) {
      sum[k] += beta[k];
      sq[k] += beta[k] * beta[k];
    }
  }
  for (int k = 0; k < sys.dim(); ++k) {
    const double avg = sum[k] / kReps;
    const double sd = std::sqrt((sq[k] / kReps - avg * avg) * kReps / (kReps - 1));
    EXPECT_NEAR(avg, target[k], 4 * sd / std::sqrt(kReps)) << "r=" << k;
  }
}

TEST(Deviation, Examples) {
  const BasisSystem sys(BasisFamily::haar(), Window(0, 1), 2);
  const std::size_t g = min_deviation_grid(sys);
  // Pieces (2, 0, 1, 1): cell coefficients (c0, c1) give values (c0-c1, c0+c1)/sqrt(delta).
  const double r = std::sqrt(0.5);
  const CoefficientExpansion est(sys, {r * 1.0, r * -1.0, r * 1.0, 0.0});
  const auto one = [](double) { return 1.0; };
  const auto rep = deviation_stat(est, one, [](double) { return 4.0; }, g, DeviationMode::AgainstTruth);
  EXPECT_NEAR(rep.statistic, 0.5, 1e-12);
  EXPECT_LT(rep.argmax_x, 0.5);

  const auto same = deviation_stat(est, est, one, g, DeviationMode::AgainstExpectation);
  EXPECT_EQ(same.statistic, 0.0);

  const BasisSystem leg(BasisFamily::legendre(2), Window(0.5, 1.5), 3);
  const auto shifted = project([](double x) { return x * x + 0.3; }, leg);
  const auto rep2 = deviation_stat(shifted, [](double x) { return x * x; }, one, min_deviation_grid(leg),
                                   DeviationMode::AgainstTruth);
  EXPECT_NEAR(rep2.statistic, 0.3, 1e-9);
}

TEST(Deviation, Preconditions) {
  const BasisSystem sys(BasisFamily::legendre(1), Window(-1, 1), 2);
  const CoefficientExpansion est(sys, std::vector<double>(4, 0.0));
  const auto zero = [](double) { return 0.0; };
  EXPECT_THROW(deviation_stat(est, zero, [](double x) { return x; }, min_deviation_grid(sys),
                              DeviationMode::AgainstTruth),
               std::domain_error);
  EXPECT_THROW(deviation_stat(est, zero, [](double) { return 1.0; }, min_deviation_grid(sys) - 1,
                              DeviationMode::AgainstTruth),
               std::invalid_argument);
}

TEST(Deviation, StableUnderFurtherRefinement) {
  const auto model = LevyModel::gamma(1, 1);
  const auto s = [&](double x) { return levy_density(model, x); };
  for (const auto& fam : {BasisFamily::trigonometric(4), BasisFamily::legendre(3), BasisFamily::haar()}) {
    const BasisSystem sys(fam, Window(0.5, 1.5), 4);
    const auto est = make_estimate(sample_increments(model, 20'000, 0.01, 8), sys);
    const auto rep = deviation_stat(est, s, s, min_deviation_grid(sys), DeviationMode::AgainstTruth);
    const auto finer = deviation_stat(est, s, s, 2 * rep.grid, DeviationMode::AgainstTruth);
    EXPECT_LE(std::abs(finer.statistic - rep.statistic), 1e-6 * rep.statistic) << fam.name();
    EXPECT_GE(rep.argmax_x, 0.5);
    EXPECT_LE(rep.argmax_x, 1.5);
  }
}

TEST(Deviation, ShrinksAsHorizonGrows) {
  const auto model = LevyModel::gamma(1, 1);
  const auto s = [&](double x) { return levy_density(model, x); };
  const BasisSystem sys(BasisFamily::haar(), Window(0.5, 1.5), 4);
  const double kappa = 0.6;
  double prev = INFINITY;
  for (double T : {10.0, 100.0, 1000.0}) {
    const auto n = static_cast<std::size_t>(std::llround(std::pow(T, 1 / kappa)));
    std::vector<double> stats;
    for (int r = 0; r < 50; ++r) {
      const auto est = make_estimate(sample_increments(model, n, T / n, 300 + r), sys);
      stats.push_back(deviation_stat(est, s, s, min_deviation_grid(sys), DeviationMode::AgainstTruth).statistic);
    }
    const double med = median(stats);
    EXPECT_LT(med, prev) << "T=" << T;
    prev = med;
  }
}

TEST(Deviation, CenteringBiasWithinTheoreticalBound) {
  // sup |E s_hat - s~| <= q J C1 (C1 + C2) / (b - a) * n^{kappa-1} m, with q
  // twice the fitted small-time constant.
  const auto model = LevyModel::gamma(1, 1);
  const Window D(0.5, 1.5);
  const double q = 2 * fitted_small_time_q(model, D);
  const double kappa = 0.6;
  for (const auto& fam : {BasisFamily::haar(), BasisFamily::trigonometric(2), BasisFamily::legendre(1)}) {
    const auto bc = boundedness_constants(fam);
    const double brevec = q * fam.order() * bc.c1 * (bc.c1 + bc.c2) / D.width();
    for (double n : {1e3, 1e4}) {
      const double delta = std::pow(n, kappa) / n;
      for (int m : {4, 8, 16}) {
        const BasisSystem sys(fam, D, m);
        const auto mean = expected_estimate(model, sys, delta);
        const auto truth = projection_truth(model, sys);
        const double gap = deviation_stat(mean, truth, [](double) { return 1.0; }, min_deviation_grid(sys),
                                          DeviationMode::AgainstExpectation)
                               .statistic;
        EXPECT_LE(gap, brevec * std::pow(n, kappa - 1) * m) << fam.name() << " n=" << n << " m=" << m;
      }
    }
  }
}
