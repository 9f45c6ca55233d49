#pragma once

#include "snev/special_fn.hpp"

namespace snev::detail {

struct Gl20 {
  double x[20];
  double w[20];
  Gl20() { gauss_legendre(20, x, w); }
};

inline const Gl20& gl20() {
  static const Gl20 g;
  return g;
}

// Composite 20-point Gauss-Legendre over k equal panels of [lo, hi].
template <class F>
double gl_panels(const F& f, double lo, double hi, int k) {
  const Gl20& g = gl20();
  const double step = (hi - lo) / k;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double mid = lo + (i + 0.5) * step;
    const double half = 0.5 * step;
    double acc = 0.0;
    for (int j = 0; j < 20; ++j) acc += g.w[j] * f(mid + half * g.x[j]);
    total += half * acc;
  }
  return total;
}

}  // namespace snev::detail
