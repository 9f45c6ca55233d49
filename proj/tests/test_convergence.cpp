#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "snev/convergence.hpp"
#include "snev/errors.hpp"
#include "snev/norming.hpp"

using namespace snev;

namespace {
bool close_abs(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

double gumbel(double x) { return std::exp(-std::exp(-x)); }

// Brute grid maximum of |F^n(a x + b) - Lambda(x)| used to certify the
// refined search; a grid value can only undershoot the true sup.
double dense_rescan(double lambda, double n, int points) {
  const double lo = -2.0 - std::log(std::log(n));
  const double hi = 3.0 + std::log(n);
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    best = std::max(best, std::fabs(max_cdf(lambda, n, x) - gumbel(x)));
  }
  return best;
}
}  // namespace

TEST_CASE("pointwise distribution of the normalized maximum") {
  CHECK(close_abs(max_cdf(1.0, 1e6, 0.0), 0.3818633675374708, 1e-12));
  // far in the right tail both laws are essentially 1
  CHECK(close_abs(max_cdf(1.0, 1e6, 25.0), 1.0, 1e-9));
  CHECK(max_cdf(1.0, 1e6, -8.0) < 1e-200);

  CHECK_THROWS_AS(max_cdf(1.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(max_cdf(1.0, 1e6, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(max_cdf(-1.0, 10.0, 0.0), RegimeError);
  CHECK_NOTHROW(max_cdf(-1.0, 34.0, 0.0));
}

TEST_CASE("uniform distance against pinned values") {
  const DistanceReport d4 = sup_distance(1.0, 1e4);
  CHECK(close_abs(d4.delta_n, 0.036271824100811978, 1e-11));
  CHECK(close_abs(d4.argmax_x, 1.2068878766840228, 1e-6));
  CHECK(d4.bracket_width < 1e-8);
  CHECK(close_abs(d4.delta_times_log_n, d4.delta_n * std::log(1e4), 1e-15));
  CHECK(d4.n_is_integer);

  CHECK(close_abs(sup_distance(1.0, 1e3).delta_n, 0.0478355008014, 1e-11));
  CHECK(close_abs(sup_distance(1.0, 1e5).delta_n, 0.0291398664606, 1e-11));
  const DistanceReport d6 = sup_distance(1.0, 1e6);
  CHECK(close_abs(d6.delta_n, 0.024320574700235742, 1e-11));
  CHECK(close_abs(d6.argmax_x, 1.2389275066147802, 1e-6));
  CHECK(close_abs(sup_distance(1.0, 1e7).delta_n, 0.0208531203256, 1e-11));
  CHECK(close_abs(sup_distance(1.0, 1e8).delta_n, 0.0182418975927, 1e-11));
  CHECK(close_abs(sup_distance(1.0, 1e9).delta_n, 0.0162062700202, 1e-11));

  CHECK(close_abs(sup_distance(-1.0, 1e3).delta_n, 0.13986557416, 1e-10));
  CHECK(close_abs(sup_distance(-1.0, 1e4).delta_n, 0.105176150765, 1e-11));
  const DistanceReport dm5 = sup_distance(-1.0, 1e5);
  CHECK(close_abs(dm5.delta_n, 0.083700730210826468, 1e-11));
  CHECK(close_abs(dm5.argmax_x, 0.52727975819403294, 1e-6));
  CHECK(close_abs(sup_distance(-1.0, 1e9).delta_n, 0.0453208923698, 1e-11));

  const DistanceReport dz = sup_distance(0.0, 1e6);
  CHECK(close_abs(dz.delta_n, 0.025597733193384431, 1e-11));
  CHECK(close_abs(dz.argmax_x, 1.235444950945324, 1e-6));

  const DistanceReport dfrac = sup_distance(1.0, 5000.5);
  CHECK(!dfrac.n_is_integer);
  CHECK(dfrac.delta_n < sup_distance(1.0, 5000.0).delta_n * 1.001);
}

TEST_CASE("refined sup dominates a dense grid rescan") {
  struct Probe {
    double lambda, n;
  };
  for (const Probe& p : {Probe{1.0, 1e4}, Probe{-1.0, 1e5}, Probe{0.0, 1e6}}) {
    const double refined = sup_distance(p.lambda, p.n).delta_n;
    const double dense = dense_rescan(p.lambda, p.n, 200001);
    CHECK_MESSAGE(dense <= refined + 1e-12, "lambda=" << p.lambda);
    CHECK_MESSAGE(refined - dense <= 3e-8, "lambda=" << p.lambda << " gap=" << refined - dense);
  }
}

TEST_CASE("deviation shape constant") {
  CHECK(close_abs(m_lambda(1.0), 0.65265754576510293, 1e-12));
  CHECK(close_abs(m_lambda(-0.5), 3.3792063103050238, 1e-12));
  CHECK(close_abs(m_lambda(-1.0), 3.4140529258743628, 1e-12));
  CHECK(close_abs(m_lambda(-2.0), 7.4116748335396947, 1e-12));
  CHECK(close_abs(m_lambda(-5.0), 36.978759525212929, 1e-12));
  // shape-free on the positive side; the cache must not blur distinct keys
  CHECK(close_abs(m_lambda(0.25), m_lambda(17.0), 1e-13));
  CHECK(m_lambda(-0.5) != m_lambda(-1.0));
  CHECK_THROWS_AS(m_lambda(0.0), RegimeError);
}

TEST_CASE("first deviation term") {
  CHECK(close_abs(leading_term(1.0, 1e6, 0.0), 0.01532746116384422, 1e-15));
  CHECK(close_abs(leading_term(-1.0, 1e6, 0.0), 0.075812407345707739, 1e-15));
  // Lambda e^{-x} a^2 (1 + x + x^2/2) restated by hand at one point
  const double a2 = std::pow(solve_constants(1.0, 1e4).a_n, 2);
  const double x = 1.5;
  CHECK(close_abs(leading_term(1.0, 1e4, x),
                  gumbel(x) * std::exp(-x) * a2 * (1.0 + x + 0.5 * x * x), 1e-15));
  CHECK_THROWS_AS(leading_term(0.0, 1e4, 0.0), RegimeError);
}

TEST_CASE("proof diagnostics: exact reassembly and claimed bounds") {
  struct Case {
    double lambda;
    std::vector<double> ns;
  };
  const std::vector<Case> cases = {{1.0, {9, 100, 1e4, 1e6, 1e9}},
                                   {-1.0, {34, 100, 1e4, 1e6, 1e9}},
                                   {0.0, {9, 1e4, 1e9}}};
  for (const Case& c : cases) {
    for (double n : c.ns) {
      const AuxSequences aux = aux_sequences(solve_constants(c.lambda, n));
      const double x_left = c.lambda == 0.0 ? -1.5 : -aux.value;
      for (int i = 1; i <= 40; ++i) {
        const double x = x_left + (12.0 - x_left) * i / 40.0;
        const ProofDiagnostics pd = proof_diagnostics(c.lambda, n, x);
        const double fn = max_cdf(c.lambda, n, x);
        const double rebuilt = gumbel(x) * pd.a_big * pd.b_big;
        CHECK_MESSAGE(close_abs(fn, rebuilt, 1e-10),
                      "lambda=" << c.lambda << " n=" << n << " x=" << x);
        CHECK(pd.r >= 0.0);
        if (c.lambda != 0.0) {
          CHECK_MESSAGE(pd.bounds_applicable, "lambda=" << c.lambda << " n=" << n << " x=" << x);
          CHECK(pd.psi_bound_pass);
          CHECK(pd.r_bound_pass);
        } else {
          CHECK(!pd.bounds_applicable);
        }
      }
    }
  }

  // outside the claimed window the flags report inapplicability, not failure
  const ProofDiagnostics far_left = proof_diagnostics(1.0, 100.0, -3.0);
  CHECK(!far_left.bounds_applicable);
  CHECK(far_left.psi_bound_pass);
  const ProofDiagnostics below = proof_diagnostics(-1.0, 20.0, 1.0);
  CHECK(!below.bounds_applicable);
}

TEST_CASE("rate curve assembly") {
  const std::vector<std::int64_t> grid{1000, 10000, 100000};
  const RateCurve rc = rate_curve(1.0, grid, Exec::Serial);
  REQUIRE(rc.points.size() == 3);
  REQUIRE(rc.predicted.size() == 3);
  CHECK(rc.points[0].delta_n > rc.points[1].delta_n);
  CHECK(rc.points[1].delta_n > rc.points[2].delta_n);
  const double big_m = m_lambda(1.0);
  for (std::size_t i = 0; i < 3; ++i) {
    const double a2 = std::pow(solve_constants(1.0, static_cast<double>(grid[i])).a_n, 2);
    CHECK(close_abs(rc.predicted[i], a2 * big_m, 1e-15));
    CHECK(rc.band_min <= rc.points[i].delta_times_log_n);
    CHECK(rc.points[i].delta_times_log_n <= rc.band_max);
  }
  // top decade covers n >= 1e4 here
  double want_dev = 0.0;
  for (std::size_t i = 1; i < 3; ++i)
    want_dev = std::max(want_dev, std::fabs(rc.points[i].delta_n / rc.predicted[i] - 1.0));
  CHECK(close_abs(rc.top_decade_max_rel_dev, want_dev, 1e-15));

  const RateCurve par = rate_curve(1.0, grid, Exec::Parallel);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(par.points[i].delta_n == rc.points[i].delta_n);
    CHECK(par.points[i].argmax_x == rc.points[i].argmax_x);
  }

  const RateCurve zero = rate_curve(0.0, {1000, 10000}, Exec::Serial);
  CHECK(zero.predicted.empty());
  CHECK(zero.top_decade_max_rel_dev == 0.0);

  CHECK_THROWS_AS(rate_curve(1.0, {}, Exec::Serial), std::domain_error);
  CHECK_THROWS_AS(rate_curve(1.0, {1000, 1000}, Exec::Serial), std::domain_error);
  CHECK_THROWS_AS(rate_curve(1.0, {1, 1000}, Exec::Serial), std::domain_error);
  CHECK_THROWS_AS(rate_curve(-1.0, {20, 1000}, Exec::Serial), RegimeError);
}

TEST_CASE("measured deviation against the first-term prediction at 1e9") {
  const double ratio_pos =
      sup_distance(1.0, 1e9).delta_n / (std::pow(solve_constants(1.0, 1e9).a_n, 2) * m_lambda(1.0));
  CHECK(close_abs(ratio_pos, 0.9280406309, 2e-9));

  const double ratio_neg = sup_distance(-1.0, 1e9).delta_n /
                           (std::pow(solve_constants(-1.0, 1e9).a_n, 2) * m_lambda(-1.0));
  CHECK(close_abs(ratio_neg, 0.8552259854, 2e-9));

  // the negative side climbs toward 1 from far below across the decades
  double prev = 0.0;
  for (double n = 1e3; n <= 1e9; n *= 100.0) {
    const double r = sup_distance(-1.0, n).delta_n /
                     (std::pow(solve_constants(-1.0, n).a_n, 2) * m_lambda(-1.0));
    CHECK(r > prev);
    prev = r;
  }
  CHECK(prev < 0.9);
}

TEST_CASE("monte carlo stream is pinned and execution-mode invariant") {
  const double ks = monte_carlo_check(1.0, 1000, 2000, 42, Exec::Serial);
  CHECK(ks == 0.044624187110945956);
  CHECK(monte_carlo_check(1.0, 1000, 2000, 42, Exec::Parallel) == ks);
  CHECK(monte_carlo_check(1.0, 1000, 2000, 7, Exec::Serial) == 0.06732158676076716);

  CHECK_THROWS_AS(monte_carlo_check(1.0, 1000, 999, 42), std::domain_error);
  CHECK_THROWS_AS(monte_carlo_check(1.0, 1, 2000, 42), std::domain_error);
  CHECK_THROWS_AS(monte_carlo_check(1.0, 5000000, 1000, 42), std::domain_error);
}

TEST_CASE("empirical-cdf deviation budget") {
  CHECK(close_abs(dkw_epsilon(1e-6, 1e6), std::sqrt(std::log(2e6) / 2e6), 1e-15));
  CHECK_THROWS_AS(dkw_epsilon(0.0, 100.0), std::domain_error);
  CHECK_THROWS_AS(dkw_epsilon(1.0, 100.0), std::domain_error);
  CHECK_THROWS_AS(dkw_epsilon(0.5, 0.0), std::domain_error);
}
