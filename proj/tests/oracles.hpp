#pragma once

#include <cmath>

namespace oracle {

// High-precision Q(x) by composite Simpson quadrature in long double,
// independent of the erfc-backed implementation path. The Gaussian tail is
// factored out (Q(x) = phi(x) * int_0^U exp(-x u - u^2/2) du) so the result
// keeps relative accuracy far into the tail.
inline long double qfunc_quadrature(double xd) {
  const long double x = xd;
  if (x < 0.0L) return 1.0L - qfunc_quadrature(-xd);
  const long double span = 12.0L;
  const int n = 200000;  // even
  const long double h = span / n;
  auto g = [&](long double u) { return std::exp(-x * u - 0.5L * u * u); };
  long double sum = g(0.0L) + g(span);
  for (int i = 1; i < n; ++i) sum += g(i * h) * (i % 2 ? 4.0L : 2.0L);
  const long double integral = sum * h / 3.0L;
  const long double inv_sqrt_2pi = 0.39894228040143267793994605993438L;
  return inv_sqrt_2pi * std::exp(-0.5L * x * x) * integral;
}

}  // namespace oracle
