#include "snev/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "panel_quad.hpp"

namespace snev {

namespace {

constexpr double kLn2Pi = 1.8378770664093454836;
constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_finite(double x, const char* who) {
  if (!std::isfinite(x)) throw std::domain_error(std::string(who) + ": non-finite argument");
}

}  // namespace

double normal_pdf(double x) {
  require_finite(x, "normal_pdf");
  return std::exp(-0.5 * x * x - 0.5 * kLn2Pi);
}

LogScaledValue normal_pdf_log(double x) {
  require_finite(x, "normal_pdf_log");
  return LogScaledValue::from_log(-0.5 * x * x - 0.5 * kLn2Pi, 1);
}

double normal_cdf(double x) {
  require_finite(x, "normal_cdf");
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double log_normal_sf(double x) {
  require_finite(x, "normal_survival");
  if (x <= 26.0) return std::log(0.5 * std::erfc(x * kInvSqrt2));
  // Mills asymptotic series: 1-Phi(x) = phi(x)/x * sum_k (-1)^k (2k-1)!! x^{-2k}.
  // Terms shrink below 1e-18 well before the series turns for x > 26.
  double s = 1.0;
  double term = 1.0;
  for (int k = 1; k <= 30; ++k) {
    term *= -(2.0 * k - 1.0) / (x * x);
    if (std::fabs(term) < 1e-18 * std::fabs(s)) break;
    s += term;
  }
  return -0.5 * x * x - 0.5 * kLn2Pi - std::log(x) + std::log(s);
}

LogScaledValue normal_survival(double x) {
  return LogScaledValue::from_log(log_normal_sf(x), 1);
}

double owen_t(double h, double a) {
  require_finite(h, "owen_t");
  require_finite(a, "owen_t");
  if (a == 0.0) return 0.0;
  const double sign = a > 0.0 ? 1.0 : -1.0;
  const double ha = std::fabs(h);
  const double aa = std::fabs(a);
  if (ha <= 1e-12) return sign * std::atan(aa) / (2.0 * std::numbers::pi);
  // Beyond t_eff the integrand is below e^{-45} of the total; cut there.
  const double t_eff = std::min(aa, std::max(8.0, 9.49 / ha));
  auto f = [ha](double t) { return std::exp(-0.5 * ha * ha * (1.0 + t * t)) / (1.0 + t * t); };
  double prev = 0.0;
  double prev_diff = HUGE_VAL;
  bool have_prev = false;
  for (int k = 1; k <= (1 << 15); k *= 2) {
    const double cur = detail::gl_panels(f, 0.0, t_eff, k);
    if (have_prev) {
      const double diff = std::fabs(cur - prev);
      // converged, or stalled on the roundoff plateau
      if (diff <= std::max(1e-17, 1e-15 * std::fabs(cur)) || (k >= 16 && diff >= prev_diff))
        return sign * cur / (2.0 * std::numbers::pi);
      prev_diff = diff;
    }
    prev = cur;
    have_prev = true;
  }
  throw std::runtime_error("owen_t: panel doubling did not converge");
}

double lambert_w0(double x) {
  require_finite(x, "lambert_w0");
  constexpr double kNegInvE = -0.36787944117144233;  // nearest double to -1/e
  if (x < kNegInvE) throw std::domain_error("lambert_w0: argument below -1/e");
  if (x == 0.0) return 0.0;

  if (x > std::numbers::e) {
    // Newton on w + log w = log x; overflow-free for x up to DBL_MAX.
    const double lx = std::log(x);
    double w = lx - std::log(lx);
    for (int it = 0; it < 60; ++it) {
      const double dw = (w + std::log(w) - lx) * w / (w + 1.0);
      w -= dw;
      if (std::fabs(dw) <= 1e-16 * w) break;
    }
    w -= (w + std::log(w) - lx) * w / (w + 1.0);
    return w;
  }

  double w;
  if (x < -0.3) {
    // branch-point series in p = sqrt(2 (1 + e x))
    const double p = std::sqrt(std::max(0.0, 2.0 * (1.0 + std::numbers::e * x)));
    w = -1.0 + p * (1.0 - p * (1.0 / 3.0 - p * (11.0 / 72.0 - p * (43.0 / 540.0))));
    if (p < 1e-3) return w;  // Halley denominators degenerate at the branch point
  } else {
    w = x * (1.0 - x);
  }
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    const double dw = f / denom;
    w -= dw;
    if (std::fabs(dw) <= 1e-16 * (std::fabs(w) + 1e-300)) break;
  }
  return w;
}

void gauss_legendre(int n, double* nodes, double* weights) {
  if (n < 1) throw std::domain_error("gauss_legendre: n < 1");
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton on P_n from the Chebyshev-angle initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    p0 = 1.0;
    double p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
    }
    pp = n * (z * p0 - p1) / (z * z - 1.0);
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

}  // namespace snev
