#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracle_fns.hpp"
#include "snev/errors.hpp"
#include "snev/norming.hpp"

using namespace snev;

namespace {
bool close_abs(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// Defining equation in log form, recomputed here so a sign slip in the
// library would not cancel out of its own residual.
double identity_defect(double lambda, double n, double b) {
  const double logn = std::log(n);
  if (lambda > 0.0) return std::log(std::numbers::pi / 2.0) + 2.0 * std::log(b) + b * b - 2.0 * logn;
  if (lambda == 0.0)
    return std::log(2.0 * std::numbers::pi) + 2.0 * std::log(b) + b * b - 2.0 * logn;
  const double m = std::fabs(lambda);
  const double c = 1.0 + m * m;
  return std::log(std::numbers::pi * m * c) + 2.0 * std::log(b) + 0.5 * c * b * b - logn;
}
}  // namespace

TEST_CASE("norming constants at pinned points") {
  const NormingConstants p9 = solve_constants(1.0, std::int64_t{9});
  CHECK(close_abs(p9.b_n, 1.6981662176308407, 1e-15));
  CHECK(close_abs(p9.a_n, 0.58887050608928493, 1e-15));
  CHECK(p9.n_is_integer);
  CHECK(p9.regime == Regime::Positive);
  CHECK(p9.b_n > 1.69);
  CHECK(p9.b_n < 1.70);
  CHECK(close_abs(aux_sequences(p9).value, 0.057417552125495985, 1e-14));

  // b is shape-free on the positive side
  CHECK(solve_constants(7.5, 9.0).b_n == p9.b_n);

  const NormingConstants z1k = solve_constants(0.0, 1000.0);
  CHECK(close_abs(z1k.b_n, 3.1152837746448987, 1e-15));
  CHECK(close_abs(z1k.a_n, 0.32099804458872672, 1e-15));
  CHECK(z1k.regime == Regime::Zero);

  const NormingConstants m100 = solve_constants(-1.0, 100.0);
  CHECK(close_abs(m100.b_n, 1.4316537900142283, 1e-15));
  CHECK(close_abs(m100.a_n, 0.34924644735165394, 1e-15));
  CHECK(close_abs(aux_sequences(m100).value, 0.34416239546101496, 1e-14));
  CHECK(m100.regime == Regime::Negative);

  const NormingConstants frac = solve_constants(1.0, 9.5);
  CHECK(!frac.n_is_integer);
  CHECK(frac.b_n > p9.b_n);
}

TEST_CASE("defining identity holds to residual accuracy everywhere") {
  for (double lam : {0.3, 1.0, 5.0, 0.0, -0.3, -1.0, -5.0}) {
    for (double n = 2.0; n <= 1e12; n *= 10.0) {
      const NormingConstants nc = solve_constants(lam, n);
      CHECK_MESSAGE(std::fabs(nc.residual) <= 1e-12, "lambda=" << lam << " n=" << n
                                                               << " residual=" << nc.residual);
      CHECK_MESSAGE(std::fabs(identity_defect(lam, n, nc.b_n)) <= 1e-10,
                    "lambda=" << lam << " n=" << n);
    }
  }
}

TEST_CASE("closed form agrees with direct bisection of the identity") {
  struct Probe {
    double lambda, n;
  };
  for (const Probe& p : {Probe{1.0, 9.0}, Probe{1.0, 1e6}, Probe{-1.0, 100.0}, Probe{-1.0, 1e8},
                         Probe{0.0, 1e3}, Probe{2.5, 1e4}, Probe{-0.7, 50.0}}) {
    const double b = solve_constants(p.lambda, p.n).b_n;
    const double want = oracle::bisect(
        [&p](double t) { return identity_defect(p.lambda, p.n, t); }, 1e-3, 60.0);
    CHECK_MESSAGE(std::fabs(b - want) <= 1e-12 * want, "lambda=" << p.lambda << " n=" << p.n
                                                                 << " b=" << b << " want=" << want);
  }
}

TEST_CASE("scale inequalities along the n axis") {
  // positive side: b^2 < 2 log n from n = 2 on, b^2 / log n > 1.1 from n = 9
  for (double lam : {0.5, 1.0, 2.0, 5.0}) {
    for (double n = 2.0; n <= 1e9; n = std::max(n + 1.0, n * 1.3)) {
      const double b2 = std::pow(solve_constants(lam, n).b_n, 2);
      CHECK_MESSAGE(b2 < 2.0 * std::log(n), "lambda=" << lam << " n=" << n);
      if (n >= 9.0) CHECK_MESSAGE(b2 / std::log(n) > 1.1, "lambda=" << lam << " n=" << n);
    }
  }
  CHECK(std::pow(solve_constants(1.0, 8.0).b_n, 2) < std::numbers::e);
  CHECK(std::pow(solve_constants(1.0, 2.0).b_n, 2) < 1.0);

  // negative side: (1 + lambda^2) b^2 < 2 log n from the regime start on
  for (double lam : {-0.5, -1.0, -2.0, -5.0}) {
    const double start = static_cast<double>(n_zero(lam));
    for (double n = start; n <= 1e9; n = std::max(n + 1.0, n * 1.3)) {
      const double b2 = std::pow(solve_constants(lam, n).b_n, 2);
      CHECK_MESSAGE((1.0 + lam * lam) * b2 < 2.0 * std::log(n), "lambda=" << lam << " n=" << n);
    }
  }
}

TEST_CASE("slow approach of the scale to its limit") {
  // b^2 ~ 2 log n only logarithmically; the gap is still a few percent at
  // n = 1e12 and decidedly larger on the negative side.
  for (double lam : {0.5, 1.0, 0.0}) {
    double prev = HUGE_VAL;
    for (double n = 1e3; n <= 1e12; n *= 10.0) {
      const double b2 = std::pow(solve_constants(lam, n).b_n, 2);
      const double ratio = 2.0 * std::log(n) / b2;
      CHECK(ratio < prev);  // decreases toward 1 from above
      prev = ratio;
    }
    CHECK(prev > 1.0);
    CHECK(prev < 1.15);
  }
  for (double lam : {-0.5, -1.0, -2.0}) {
    double prev = 0.0;
    for (double n = 1e3; n <= 1e12; n *= 10.0) {
      const double y = (1.0 + lam * lam) * std::pow(solve_constants(lam, n).b_n, 2);
      const double ratio = y / (2.0 * std::log(n));
      CHECK(ratio > prev);  // increases toward 1 from below
      prev = ratio;
    }
    CHECK(prev > 0.75);
    CHECK(prev < 1.0);
  }
}

TEST_CASE("aux sequences and the regime start index") {
  CHECK(aux_sequences(solve_constants(1.0, 2.0)).below_n0);
  CHECK(!aux_sequences(solve_constants(1.0, 3.0)).below_n0);
  CHECK(aux_sequences(solve_constants(-1.0, 5.0)).below_n0);
  CHECK(!aux_sequences(solve_constants(-1.0, 6.0)).below_n0);

  CHECK(n_zero(-0.1) == 4);
  CHECK(n_zero(-0.5) == 17);
  CHECK(n_zero(-1.0) == 34);
  CHECK(n_zero(-2.0) == 67);
  CHECK(n_zero(-5.0) == 167);
  // start index grows with tail suppression strength
  CHECK(close_abs(aux_sequences(solve_constants(-1.0, 34.0)).value, 0.0094619906068962711, 1e-14));
  CHECK(aux_sequences(solve_constants(-1.0, 33.0)).value < 0.0);

  CHECK_THROWS_AS(n_zero(0.0), RegimeError);
  CHECK_THROWS_AS(n_zero(1.0), RegimeError);
  CHECK_THROWS_AS(n_zero(std::nan("")), std::domain_error);
}

TEST_CASE("bound suite reproduces its suprema") {
  const BoundSuiteReport pos = bound_suite(1.0, 1e9);
  REQUIRE(pos.checks.size() == 5);
  CHECK(pos.all_pass);
  const double pos_max[5] = {1.1077387792, 0.3672617777, 0.5413411321, 0.1176775496,
                             1.1593524640};
  const double pos_arg[5] = {56.0, 9.0, 137.0, 9.0, 9.9};
  for (int i = 0; i < 5; ++i) {
    CHECK_MESSAGE(close_abs(pos.checks[i].max_observed, pos_max[i], 1e-9), pos.checks[i].name);
    CHECK_MESSAGE(close_abs(pos.checks[i].argmax_n, pos_arg[i], 1e-6 * pos_arg[i]),
                  pos.checks[i].name);
    CHECK(pos.checks[i].start_n == 9.0);
    CHECK(pos.checks[i].pass);
  }

  const BoundSuiteReport neg = bound_suite(-1.0, 1e9);
  REQUIRE(neg.checks.size() == 5);
  CHECK(neg.all_pass);
  const double neg_max[5] = {1.1077388218, 0.3678776423, 0.5413278458, 0.0424556910,
                             0.7357568812};
  const double neg_arg[5] = {338.0, 33.0, 891.58, 13.0, 17.0};
  const double neg_start[5] = {6.0, 2.0, 34.0, 2.0, 2.0};
  for (int i = 0; i < 5; ++i) {
    CHECK_MESSAGE(close_abs(neg.checks[i].max_observed, neg_max[i], 1e-9), neg.checks[i].name);
    CHECK_MESSAGE(close_abs(neg.checks[i].argmax_n, neg_arg[i], 1e-4 * neg_arg[i]),
                  neg.checks[i].name);
    CHECK(neg.checks[i].start_n == neg_start[i]);
    CHECK(neg.checks[i].pass);
  }

  CHECK_THROWS_AS(bound_suite(0.0, 1e6), RegimeError);
  CHECK_THROWS_AS(bound_suite(1.0, 1.5), std::domain_error);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(solve_constants(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(solve_constants(1.0, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(solve_constants(std::nan(""), 10.0), std::domain_error);
}
