#pragma once

#include <cstdint>
#include <vector>

#include "snev/skew_normal.hpp"

namespace snev {

// Location/scale sequences (b_n, a_n) defined implicitly by regime:
//   lambda > 0: sqrt(pi/2) b exp(b^2/2) = n,            a = 1/b
//   lambda < 0: pi |lambda| (1+lambda^2) b^2
//                 * exp((1+lambda^2) b^2 / 2) = n,      a = 1/((1+lambda^2) b)
//   lambda = 0: 2 pi b^2 exp(b^2) = n^2,                a = 1/b
// residual is the relative defect of the defining equation at (b_n, a_n).
struct NormingConstants {
  double n;  // real n >= 2 accepted so curves can use non-integer grids
  bool n_is_integer;
  double lambda;
  Regime regime;
  double b_n;
  double a_n;
  double residual;
};

NormingConstants solve_constants(double lambda, double n);
NormingConstants solve_constants(double lambda, std::int64_t n);

// c_n = log log b_n^2 (lambda > 0) or d_n = log log[(1+lambda^2) b_n^2]
// (lambda < 0). below_n0 is set instead of producing NaN when the inner
// logarithm argument is <= 1.
struct AuxSequences {
  Regime regime;
  bool below_n0;
  double value;  // meaningful only when !below_n0
};
AuxSequences aux_sequences(const NormingConstants& nc);

// Smallest integer n >= 2 with d_n > 0; the operational start index of the
// negative-regime experiments. lambda < 0 required.
std::int64_t n_zero(double lambda);

// One monitored quantity with its printed constant.
struct BoundCheck {
  const char* name;
  double start_n;      // first n the bound is claimed from
  double bound;
  double max_observed;
  double argmax_n;
  bool pass;
};

struct BoundSuiteReport {
  double lambda;
  double n_max;
  std::vector<BoundCheck> checks;
  bool all_pass;
};

// Evaluates the five printed bounds of the matching regime on a geometric
// n-grid (ratio 1.1, densified to every integer up to 400) from each
// bound's start index to n_max. Failures are report entries, not throws.
BoundSuiteReport bound_suite(double lambda, double n_max);

}  // namespace snev
