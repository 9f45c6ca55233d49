#pragma once

#include <cstdint>
#include <vector>

#include "snev/log_scaled.hpp"

namespace snev {

enum class Regime { Negative, Zero, Positive };

struct ShapeParameter {
  double lambda;
  Regime regime;

  explicit ShapeParameter(double lam);
};

enum class SurvivalMethod { DirectOwen, LogTailQuadrature };

struct SurvivalEvaluation {
  LogScaledValue value;  // 1 - F_lambda(x), in (0, 1]
  SurvivalMethod method;
  double x;
};

// Density 2 phi(x) Phi(lambda x).
double pdf(const ShapeParameter& sp, double x);

// F_lambda(x) = Phi(x) - 2 T(x, lambda), clamped into [0, 1].
double cdf(const ShapeParameter& sp, double x);

// Tail-stable 1 - F_lambda(x): direct Owen route below the threshold,
// log-domain evaluation at or above it. Relative accuracy about 1e-10;
// for lambda < 0 the direct difference just below the switch is
// conditioning-limited to roughly eps * Phibar(x) / S(x), which stays
// within budget for |lambda| up to about 30.
SurvivalEvaluation survival(const ShapeParameter& sp, double x);

// Where survival() switches methods. 6 for lambda >= 0, min(6, 4/|lambda|)
// for lambda < 0 (the direct difference loses digits faster the stronger
// the negative-lambda tail suppression).
double tail_threshold(const ShapeParameter& sp);

// survival forced through one method; exists so the two routes can be
// compared on an overlap window.
SurvivalEvaluation survival_via(const ShapeParameter& sp, double x, SurvivalMethod method);

// Closed-form tail approximation of 1 - F_lambda(x). Order 0 is the leading
// factor; order 1 multiplies in the x^{-2} correction, whose coefficient is
// -1 for lambda > 0 and -(1+3 lambda^2)/(lambda^2 (1+lambda^2)) for
// lambda < 0. The order-1 value can be negative at small x; the sign rides
// in the LogScaledValue.
LogScaledValue tail_expansion(const ShapeParameter& sp, double x, int order);

// Two-sided Mills-type bracket around survival(x) for lambda != 0:
//   lambda > 0: upper = 2 phi(x)/x,
//               lower = upper * (1 - (1 + 1/(lambda^2 sqrt(2 pi e))) / x^2)
//   lambda < 0: upper = 2 phi(x) phi(lambda x) / (|lambda| (1+lambda^2) x^2),
//               lower = upper * (1 - ((1+lambda^2)^2/lambda^2) / x^2)
// The bracket is guaranteed only where the lower bound is positive;
// lower_positive reports that.
struct MillsBracket {
  LogScaledValue lower;
  LogScaledValue upper;
  bool lower_positive;
};
MillsBracket mills_bracket(const ShapeParameter& sp, double x);

// Deterministic sampler: X = delta |U0| + sqrt(1-delta^2) U1 with
// delta = lambda / sqrt(1+lambda^2), U0, U1 iid standard normal, driven by
// a counter-based generator keyed on seed. count = 0 yields an empty vector.
std::vector<double> sample(const ShapeParameter& sp, std::int64_t count, std::uint64_t seed);

}  // namespace snev
