#pragma once

#include <cstdint>
#include <vector>

#include "snev/norming.hpp"

namespace snev {

// Parallel variants distribute independent work items (grid points, Monte
// Carlo replicates) across OpenMP threads; outputs are written to
// per-item slots, so results are bitwise identical to Serial.
enum class Exec { Serial, Parallel };

struct DistanceReport {
  double n;
  bool n_is_integer;
  double lambda;
  double delta_n;      // sup_x |F^n(a x + b) - Lambda(x)|
  double argmax_x;
  double delta_times_log_n;
  double bracket_width;  // final x-bracket of the golden refinement
};

struct RateCurve {
  double lambda;
  std::vector<DistanceReport> points;   // ordered by strictly increasing n
  std::vector<double> predicted;        // a_n^2 M_lambda per point; empty for lambda = 0
  double band_min = 0.0;                // min/max of delta_n log n over the grid
  double band_max = 0.0;
  double top_decade_max_rel_dev = 0.0;  // max |delta/predicted - 1|, n >= n_max/10
};

struct ProofDiagnostics {
  double x;
  LogScaledValue psi;  // 1 - F_lambda(a_n x + b_n)
  double r;            // -n log F - n psi, always >= 0
  double h;            // -n psi + exp(-x)
  double a_big;        // exp(h)
  double b_big;        // exp(-r)
  bool bounds_applicable;  // lambda>0: n>=9 and x>-c_n; lambda<0: n>=n_zero and x>-d_n
  bool psi_bound_pass;     // psi < 0.1887 (lambda>0) resp. < 0.332667 (lambda<0)
  bool r_bound_pass;       // r < 0.39 a_n^2 (lambda>0 only)
};

// F_lambda^n(a_n x + b_n) evaluated as exp(n log1p(-S)); never a naive power.
// lambda < 0 requires n >= n_zero(lambda).
double max_cdf(double lambda, double n, double x);

// Grid-then-refine search for sup_x |F^n(a_n x + b_n) - Lambda(x)|: 4096
// uniform points on a window that auto-expands while an endpoint carries
// more than a tenth of the sup, each local extremum polished by
// golden-section to an x-bracket below 1e-8.
DistanceReport sup_distance(double lambda, double n);

// The a_n^2-order term of F^n(a_n x + b_n) - Lambda(x):
//   lambda > 0: Lambda(x) e^{-x} a_n^2 (1 + x + x^2/2)
//   lambda < 0: Lambda(x) e^{-x} (1+lambda^2) a_n^2
//               ((1+3 lambda^2)/lambda^2 + 2x + x^2/2)
double leading_term(double lambda, double n, double x);

// sup_x |leading_term| / a_n^2, a lambda-only constant; cached per lambda.
double m_lambda(double lambda);

ProofDiagnostics proof_diagnostics(double lambda, double n, double x);

// One DistanceReport per grid n plus the a_n^2 M_lambda predictions and
// band summaries.
RateCurve rate_curve(double lambda, const std::vector<std::int64_t>& n_grid,
                     Exec exec = Exec::Parallel);

// Kolmogorov-Smirnov distance between `reps` normalized maxima of n draws
// each and the Gumbel law. Deterministic in (seed); reps >= 1000 and
// reps * n <= 4e9 (resource cap).
double monte_carlo_check(double lambda, std::int64_t n, std::int64_t reps,
                         std::uint64_t seed, Exec exec = Exec::Parallel);

// sqrt(log(2/alpha) / (2 m)): the empirical-cdf deviation bound used to
// budget Monte Carlo noise.
double dkw_epsilon(double alpha, double m);

}  // namespace snev
