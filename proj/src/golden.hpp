#pragma once

#include <cmath>

namespace quantcap::detail {

// Golden-section maximization of a unimodal f on [lo, hi] to width xtol.
template <class F>
double golden_max(F&& f, double lo, double hi, double xtol, int max_iters = 200) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iters && (b - a) > xtol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Golden-section minimization.
template <class F>
double golden_min(F&& f, double lo, double hi, double xtol, int max_iters = 200) {
  return golden_max([&](double x) { return -f(x); }, lo, hi, xtol, max_iters);
}

}  // namespace quantcap::detail
