#include "snev/skew_normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "snev/errors.hpp"
#include "snev/special_fn.hpp"
#include "panel_quad.hpp"
#include "rng_util.hpp"

namespace snev {

namespace {

constexpr double kLn2Pi = 1.8378770664093454836;

Regime classify(double lambda) {
  if (lambda < 0.0) return Regime::Negative;
  if (lambda > 0.0) return Regime::Positive;
  return Regime::Zero;
}

// log of I(x) = integral_x^inf 2 phi(t) Phibar(m t) dt for m = |lambda| > 0,
// evaluated with the dominant exponential pulled out so panel sums stay O(1).
// For lambda > 0 the tail survival is 2 Phibar(x) - I(x); for lambda < 0 it
// is I(x) itself.
double log_tail_integral(double m, double x) {
  const double c = 1.0 + m * m;
  // Integrand at t >= x decays like exp(-c t^2 / 2); 40/(c x) extra length
  // puts the truncated mass below e^{-40} of the peak.
  const double s1 = 40.0 / (c * x);
  // Pull the log integrand at the left endpoint so the panel sums stay O(1)
  // even when Phibar(m x) itself is far below the double range.
  const double pull = std::numbers::ln2 - 0.5 * x * x - 0.5 * kLn2Pi + log_normal_sf(m * x);
  auto f = [m, x, pull](double s) {
    const double t = x + s;
    return std::exp(std::numbers::ln2 - 0.5 * t * t - 0.5 * kLn2Pi + log_normal_sf(m * t) - pull);
  };
  double prev = 0.0;
  double prev_diff = 0.0;
  bool have_prev = false;
  for (int k = 2; k <= (1 << 12); k *= 2) {
    const double cur = detail::gl_panels(f, 0.0, s1, k);
    if (have_prev) {
      const double diff = std::fabs(cur - prev);
      // Second clause: once doubling stops reducing the change we are at the
      // roundoff floor of the pulled sum; accept.
      if (diff <= 1e-13 * std::fabs(cur) || (prev_diff > 0.0 && diff > 0.5 * prev_diff))
        return pull + std::log(cur);
      prev_diff = diff;
    }
    prev = cur;
    have_prev = true;
  }
  throw std::runtime_error("log_tail_integral: panel doubling did not converge");
}

}  // namespace

ShapeParameter::ShapeParameter(double lam) : lambda(lam), regime(classify(lam)) {
  if (!std::isfinite(lam)) throw std::domain_error("ShapeParameter: non-finite lambda");
}

double pdf(const ShapeParameter& sp, double x) {
  if (!std::isfinite(x)) throw std::domain_error("pdf: non-finite x");
  return 2.0 * normal_pdf(x) * normal_cdf(sp.lambda * x);
}

double cdf(const ShapeParameter& sp, double x) {
  if (!std::isfinite(x)) throw std::domain_error("cdf: non-finite x");
  const double v = normal_cdf(x) - 2.0 * owen_t(x, sp.lambda);
  return std::min(1.0, std::max(0.0, v));
}

double tail_threshold(const ShapeParameter& sp) {
  if (sp.regime == Regime::Negative) return std::min(6.0, 4.0 / std::fabs(sp.lambda));
  return 6.0;
}

SurvivalEvaluation survival_via(const ShapeParameter& sp, double x, SurvivalMethod method) {
  if (!std::isfinite(x)) throw std::domain_error("survival: non-finite x");
  if (sp.regime == Regime::Zero)
    return SurvivalEvaluation{normal_survival(x), SurvivalMethod::DirectOwen, x};

  if (method == SurvivalMethod::DirectOwen) {
    const double m = std::fabs(sp.lambda);
    double s;
    if (sp.regime == Regime::Positive)
      s = 0.5 * std::erfc(x * 0.70710678118654752440) + 2.0 * owen_t(x, m);
    else
      s = 0.5 * std::erfc(x * 0.70710678118654752440) - 2.0 * owen_t(x, m);
    s = std::min(1.0, std::max(0.0, s));
    return SurvivalEvaluation{LogScaledValue::from_value(s), SurvivalMethod::DirectOwen, x};
  }

  const double m = std::fabs(sp.lambda);
  if (x <= 0.0) throw std::domain_error("survival: log-tail route needs x > 0");
  if (sp.regime == Regime::Positive) {
    // S = 2 Phibar(x) - I(x); the ratio r = I / (2 Phibar) lies in (0,1).
    const double log2sf = std::numbers::ln2 + log_normal_sf(x);
    const double r = std::exp(log_tail_integral(m, x) - log2sf);
    return SurvivalEvaluation{LogScaledValue::from_log(log2sf + std::log1p(-r), 1),
                              SurvivalMethod::LogTailQuadrature, x};
  }
  return SurvivalEvaluation{LogScaledValue::from_log(log_tail_integral(m, x), 1),
                            SurvivalMethod::LogTailQuadrature, x};
}

SurvivalEvaluation survival(const ShapeParameter& sp, double x) {
  if (!std::isfinite(x)) throw std::domain_error("survival: non-finite x");
  if (sp.regime == Regime::Zero || x <= tail_threshold(sp))
    return survival_via(sp, x, SurvivalMethod::DirectOwen);
  return survival_via(sp, x, SurvivalMethod::LogTailQuadrature);
}

LogScaledValue tail_expansion(const ShapeParameter& sp, double x, int order) {
  if (!std::isfinite(x) || x <= 0.0) throw std::domain_error("tail_expansion: needs x > 0");
  if (order != 0 && order != 1) throw std::domain_error("tail_expansion: order must be 0 or 1");
  if (sp.regime == Regime::Zero) throw RegimeError("tail_expansion: undefined at lambda == 0");

  const double m = std::fabs(sp.lambda);
  double log_lead, corr;
  if (sp.regime == Regime::Positive) {
    // leading 2 phi(x)/x, correction factor 1 - x^{-2}
    log_lead = std::numbers::ln2 - 0.5 * x * x - 0.5 * kLn2Pi - std::log(x);
    corr = -1.0;
  } else {
    // leading e^{-(1+m^2) x^2/2} / (pi m (1+m^2) x^2),
    // correction factor 1 - (1+3 m^2)/(m^2(1+m^2)) x^{-2}
    const double c = 1.0 + m * m;
    log_lead = -0.5 * c * x * x - std::log(std::numbers::pi * m * c) - 2.0 * std::log(x);
    corr = -(1.0 + 3.0 * m * m) / (m * m * c);
  }
  if (order == 0) return LogScaledValue::from_log(log_lead, 1);
  const double factor = 1.0 + corr / (x * x);
  if (factor > 0.0) return LogScaledValue::from_log(log_lead + std::log(factor), 1);
  if (factor == 0.0) return LogScaledValue{0.0, 0};
  return LogScaledValue::from_log(log_lead + std::log(-factor), -1);
}

MillsBracket mills_bracket(const ShapeParameter& sp, double x) {
  if (!std::isfinite(x) || x <= 0.0) throw std::domain_error("mills_bracket: needs x > 0");
  if (sp.regime == Regime::Zero) throw RegimeError("mills_bracket: undefined at lambda == 0");
  const double m = std::fabs(sp.lambda);
  const LogScaledValue up = tail_expansion(sp, x, 0);
  double coef;  // lower = upper * (1 - coef / x^2)
  if (sp.regime == Regime::Positive)
    coef = 1.0 + 1.0 / (m * m * std::sqrt(2.0 * std::numbers::pi * std::numbers::e));
  else
    coef = (1.0 + m * m) * (1.0 + m * m) / (m * m);
  const double factor = 1.0 - coef / (x * x);
  LogScaledValue lo;
  if (factor > 0.0)
    lo = LogScaledValue::from_log(up.log_magnitude + std::log(factor), 1);
  else if (factor == 0.0)
    lo = LogScaledValue{0.0, 0};
  else
    lo = LogScaledValue::from_log(up.log_magnitude + std::log(-factor), -1);
  return MillsBracket{lo, up, lo.sign > 0};
}

std::vector<double> sample(const ShapeParameter& sp, std::int64_t count, std::uint64_t seed) {
  if (count < 0) throw std::domain_error("sample: negative count");
  const double delta = sp.lambda / std::sqrt(1.0 + sp.lambda * sp.lambda);
  const double codelta = std::sqrt(1.0 - delta * delta);
  const std::uint64_t key = detail::mix64(seed);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = detail::sn_draw(delta, codelta, key, static_cast<std::uint64_t>(i));
  return out;
}

}  // namespace snev
