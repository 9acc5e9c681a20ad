#pragma once

namespace levydev {

// Exponential integral E1(x) = int_x^inf e^{-t}/t dt for x > 0.
// Power series for x <= 1, modified Lentz continued fraction above.
double expint_e1(double x);

}  // namespace levydev
