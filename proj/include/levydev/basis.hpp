#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace levydev {

enum class Family { Trigonometric, Legendre, Haar };

class BasisFamily {
 public:
  // J even and >= 2; functions 1, cos(2 pi j t), sin(2 pi j t) for j <= J/2.
  static BasisFamily trigonometric(int J);
  // Normalized Legendre polynomials of degree 0..J.
  static BasisFamily legendre(int J);
  // Father and mother Haar wavelet, J = 1.
  static BasisFamily haar();
  // Accepts "trig", "legendre", "haar"; J is ignored for Haar.
  static BasisFamily parse(std::string_view name, int J);

  Family tag() const { return tag_; }
  int order() const { return order_; }
  int size() const { return order_ + 1; }
  std::string name() const;

  double standard_lo() const;
  double standard_hi() const;

  // Breakpoints of the smooth pieces of the unit-cell functions.
  std::vector<double> breakpoints() const;

  bool operator==(const BasisFamily&) const = default;

 private:
  BasisFamily(Family tag, int order) : tag_(tag), order_(order) {}
  Family tag_;
  int order_;
};

struct Window {
  double a;
  double b;

  Window(double a, double b);
  double width() const { return b - a; }
  bool contains(double x) const { return x >= a && x <= b; }
  bool operator==(const Window&) const = default;
};

class BasisSystem {
 public:
  BasisSystem(BasisFamily family, Window window, int m);

  const BasisFamily& family() const { return family_; }
  const Window& window() const { return window_; }
  int m() const { return m_; }
  double delta() const { return delta_; }
  int dim() const { return family_.size() * m_; }

  // Zero-based cell holding x, -1 outside [a,b]. Cells are half-open except
  // the last one, which is closed at b.
  int cell_of(double x) const;
  double cell_left(int cell) const;

  // Flattened coefficient index of (j, p) with p zero-based.
  int index(int j, int cell) const { return cell * family_.size() + j; }

 private:
  BasisFamily family_;
  Window window_;
  int m_;
  double delta_;
};

double standard_basis_eval(const BasisFamily& family, int j, double x);
double local_basis_eval(const BasisSystem& system, int j, double x);
// p is one-based, matching I_p = [a + delta(p-1), a + delta p).
double global_basis_eval(const BasisSystem& system, int j, int p, double x);

// All functions of the family rescaled to an orthonormal system on [0,1],
// written to out[0..J]. For piecewise families `piece` picks the closed
// piece whose formula is used (the default follows the half-open rule), so
// one-sided limits at breakpoints are available.
void unit_basis_values(const BasisFamily& family, double t, std::span<double> out, int piece = -1);

// Max |Gram - I| over the basis functions of every cell. Functions of
// different cells have disjoint supports, so those entries are exactly 0.
// quad_order is the number of Gauss-Legendre points per smooth piece; above
// 64 a composite 16-point rule is used.
double verify_orthonormality(const BasisSystem& system, int quad_order);

struct BoundednessConstants {
  double c1;  // max_j sqrt(delta) sup |psi_j|
  double c2;  // max_j sqrt(delta) total variation of psi_j
};

BoundednessConstants boundedness_constants(const BasisFamily& family);
BoundednessConstants boundedness_constants(const BasisSystem& system);

double legendre_p(int n, double x);

}  // namespace levydev
