#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "levydev/basis.hpp"
#include "levydev/gausssup.hpp"

namespace levydev {

struct LimitLawParams {
  BasisFamily family;
  Window window;
  int m;
  int k;
  double h1;
  double h2;
  double a_m;
  double b_m;
  double c_m;
  double formula_j;  // J inside the trig constants
};

// b_m = sqrt(ln(h1 m)/h2), a_m = 2 h2 b_m, c_m = k ln(b_m)/(2 h2).
// Throws NumericGuardError unless h1 m > e.
LimitLawParams normalization(const BasisFamily& family, const Window& window, int m,
                             TrigConvention convention = TrigConvention::BasisCount);

// u_m(y) = y/a_m + b_m - c_m/b_m, and its inverse.
double threshold_u(const LimitLawParams& params, double y);
double normalized_y(const LimitLawParams& params, double u);

double gumbel_cdf(double y);

// Leading-order remainder of the Gumbel approximation: positive
// C/sqrt(ln m) for trig, -(1/(4 sqrt h2)) ln ln m / sqrt(ln m) for Haar,
// empty for Legendre (no remainder model). Requires m >= 16.
std::optional<double> remainder_R(const BasisFamily& family, const Window& window, int m,
                                  TrigConvention convention = TrigConvention::BasisCount);

enum class AccompanyingForm {
  Stated,    // with the 2m(1 - Phi(u_m sqrt((b-a)/J))) term
  Periodic,  // without it, matching the exact law of a periodic cell
};

// A_m(y); 0 for y < -b_m^{3/2}. Trig family only, and J >= b - a.
// The quadratic exponent is frozen at its turning point y = -2 ln(h1 m) so
// the result stays monotone when -b_m^{3/2} lies below it.
double accompanying_cdf(const LimitLawParams& params, double y, AccompanyingForm form = AccompanyingForm::Stated);

double breve_c(double q, int J, double c1, double c2, const Window& window);

struct BiasConstants {
  double q;
  double c1;
  double c2;
  double kappa;
  int J;
  Window window;

  double brevec() const { return breve_c(q, J, c1, c2, window); }
  static BiasConstants for_family(double q, const BasisFamily& family, const Window& window, double kappa);
};

// brevec n^{3 kappa/2 - 1} sqrt(m)
double bias_shift(double n, int m, double kappa, double brevec);

// A_m(y + sign * 2 h2 brevec n^{3 kappa/2 - 1} sqrt(m) b_m), sign = +1 or -1.
double accompanying_shifted(const LimitLawParams& params, double y, double n, double kappa, double brevec, int sign,
                            AccompanyingForm form = AccompanyingForm::Stated);

struct OptimalM {
  int m;
  bool in_regime;  // kappa in (4/7, 2/3)
};

// round(n^{2 - 3 kappa}), at least 2.
OptimalM optimal_m(double n, double kappa);

// m sqrt(log n) / n^{kappa/2}
double lambda_n(double n, int m, double kappa);

// A CDF tabulated on a sorted grid, read as a right-continuous step function.
struct GridCdf {
  std::vector<double> x;
  std::vector<double> F;
};

// Validates sortedness and monotonicity; violations up to 1e-12 are
// rearranged away, larger ones throw std::invalid_argument.
GridCdf make_grid_cdf(std::vector<double> x, std::vector<double> F);
GridCdf tabulate_cdf(const std::vector<double>& x, const std::function<double(double)>& cdf);
// Empirical CDF of `sample` (any order) on the grid x.
GridCdf empirical_cdf(std::span<const double> sample, const std::vector<double>& x);

// Both require the same grid.
double kolmogorov_distance(const GridCdf& F, const GridCdf& G);
// Smallest eps (bisection to 1e-6) with G(x-eps)-eps <= F(x) <= G(x+eps)+eps
// at every grid point.
double levy_distance(const GridCdf& F, const GridCdf& G);

// Exact one-sample sup |F_n - G| for continuous G.
double kolmogorov_distance(std::span<const double> sample, const std::function<double(double)>& cdf);

struct GumbelExperimentConfig {
  BasisFamily family = BasisFamily::trigonometric(2);
  Window window{0.0, 1.0};
  std::vector<int> ms{10, 100, 1000};
  std::size_t reps = 200'000;
  std::uint64_t seed = 1;
  TrigConvention convention = TrigConvention::BasisCount;
  SupMethod method = SupMethod::Auto;
  std::size_t grid = 1024;
  unsigned workers = 1;
  // Grid for the Levy distance and law tables.
  double y_lo = -6.0;
  double y_hi = 16.0;
  std::size_t y_points = 11001;
};

struct GumbelExperimentRow {
  int m;
  LimitLawParams params;
  std::vector<double> y;  // sorted normalized maxima a_m (M - b_m + c_m/b_m)
  double ks_gumbel;
  double levy_gumbel;
  // Present for trig families satisfying J >= b - a.
  std::optional<double> ks_accompanying;
  std::optional<double> levy_accompanying;
  std::optional<double> ks_periodic;
  std::optional<double> levy_periodic;
};

// Maxima of m iid cell suprema (absolute, cell width b - a), normalized by
// the limit-law sequences and compared with the Gumbel law and A_m.
std::vector<GumbelExperimentRow> gumbel_experiment(const GumbelExperimentConfig& config);

}  // namespace levydev
