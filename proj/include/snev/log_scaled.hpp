#pragma once

#include <cmath>
#include <stdexcept>

namespace snev {

// A real number stored as sign * exp(log_magnitude) so that quantities at
// exp(-b_n^2 (1+lambda^2)/2) scale survive where raw doubles underflow.
// sign == 0 encodes exact zero; log_magnitude is 0 by convention then.
struct LogScaledValue {
  double log_magnitude = 0.0;
  int sign = 0;

  static LogScaledValue from_log(double log_mag, int s) {
    if (s == 0) return {0.0, 0};
    if (log_mag == -HUGE_VAL) return {0.0, 0};  // log of an underflowed zero
    if (std::isnan(log_mag) || log_mag == HUGE_VAL)
      throw std::domain_error("LogScaledValue: invalid log magnitude");
    return {log_mag, s > 0 ? 1 : -1};
  }

  static LogScaledValue from_value(double v) {
    if (std::isnan(v)) throw std::domain_error("LogScaledValue: NaN value");
    if (v == 0.0) return {0.0, 0};
    return {std::log(std::fabs(v)), v > 0.0 ? 1 : -1};
  }

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }
};

}  // namespace snev
