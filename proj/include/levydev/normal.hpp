#pragma once

namespace levydev {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double normal_pdf(double x);
double normal_cdf(double x);

// Upper tail 1 - Phi(x), computed through erfc so it keeps full relative
// precision far into the tail.
double normal_sf(double x);

}  // namespace levydev
