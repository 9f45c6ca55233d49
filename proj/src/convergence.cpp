#include "snev/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "snev/errors.hpp"
#include "snev/special_fn.hpp"
#include "rng_util.hpp"

namespace snev {

namespace {

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

// x-dependence of the a_n^2-order term divided by Lambda(x) e^{-x} a_n^2.
double shape_poly(double lambda, double x) {
  if (lambda > 0.0) return 1.0 + x + 0.5 * x * x;
  const double c = 1.0 + lambda * lambda;
  return c * ((1.0 + 3.0 * lambda * lambda) / (lambda * lambda) + 2.0 * x + 0.5 * x * x);
}

template <class F>
void for_each_index(std::int64_t count, Exec exec, const F& f) {
#ifdef _OPENMP
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) f(i);
    return;
  }
#endif
  (void)exec;
  for (std::int64_t i = 0; i < count; ++i) f(i);
}

struct GoldenResult {
  double x;
  double value;
  double width;
};

// Golden-section maximization; f is evaluated once per shrink step.
template <class F>
GoldenResult golden_max(const F& f, double a, double b, double xtol) {
  constexpr double invphi = 0.61803398874989485;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
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
  const double xm = 0.5 * (a + b);
  return GoldenResult{xm, f(xm), b - a};
}

// F_lambda^n(a_n x + b_n) with the constants solved once.
struct MaxCdfEvaluator {
  ShapeParameter sp;
  NormingConstants nc;

  MaxCdfEvaluator(double lambda, double n) : sp(lambda), nc(solve_constants(lambda, n)) {
    if (sp.regime == Regime::Negative) {
      const AuxSequences aux = aux_sequences(nc);
      // d_n grows with n, so d_n > 0 is exactly n >= n_zero(lambda).
      if (aux.below_n0 || aux.value <= 0.0)
        throw RegimeError("max_cdf: n below the negative-regime start index");
    }
  }

  double operator()(double x) const {
    const LogScaledValue s = survival(sp, nc.b_n + nc.a_n * x).value;
    const double sd = s.sign == 0 ? 0.0 : std::exp(s.log_magnitude);
    return std::exp(nc.n * std::log1p(-sd));
  }

  double diff(double x) const { return (*this)(x)-gumbel_cdf(x); }
};

}  // namespace

double max_cdf(double lambda, double n, double x) {
  if (!std::isfinite(x)) throw std::domain_error("max_cdf: non-finite x");
  const MaxCdfEvaluator ev(lambda, n);
  return ev(x);
}

DistanceReport sup_distance(double lambda, double n) {
  const MaxCdfEvaluator ev(lambda, n);
  auto absd = [&ev](double x) { return std::fabs(ev.diff(x)); };

  double lo = -2.0 - std::log(std::log(n));
  double hi = 3.0 + std::log(n);
  constexpr int kGrid = 4096;
  std::vector<double> xs(kGrid), d(kGrid);

  int expansions = 0;
  for (;;) {
    const double step = (hi - lo) / (kGrid - 1);
    for (int i = 0; i < kGrid; ++i) {
      xs[i] = lo + step * i;
      d[i] = absd(xs[i]);
    }
    GoldenResult best{0.0, -1.0, 0.0};
    for (int i = 1; i + 1 < kGrid; ++i) {
      if (d[i] >= d[i - 1] && d[i] >= d[i + 1]) {
        const GoldenResult g = golden_max(absd, xs[i - 1], xs[i + 1], 1e-8);
        if (g.value > best.value) best = g;
      }
    }
    if (best.value < 0.0) throw std::runtime_error("sup_distance: no interior extremum");
    // An endpoint carrying a tenth of the sup means the window may clip it.
    if (d[0] >= best.value / 10.0) {
      if (++expansions > 60) throw std::runtime_error("sup_distance: window kept expanding");
      lo -= 0.5 * (hi - lo);
      continue;
    }
    if (d[kGrid - 1] >= best.value / 10.0) {
      if (++expansions > 60) throw std::runtime_error("sup_distance: window kept expanding");
      hi += 0.5 * (hi - lo);
      continue;
    }
    return DistanceReport{n,          std::floor(n) == n,       lambda,      best.value,
                          best.x,     best.value * std::log(n), best.width};
  }
}

double leading_term(double lambda, double n, double x) {
  if (!std::isfinite(x)) throw std::domain_error("leading_term: non-finite x");
  const ShapeParameter sp(lambda);
  if (sp.regime == Regime::Zero) throw RegimeError("leading_term: lambda must be nonzero");
  const NormingConstants nc = solve_constants(lambda, n);
  return gumbel_cdf(x) * std::exp(-x) * nc.a_n * nc.a_n * shape_poly(lambda, x);
}

double m_lambda(double lambda) {
  const ShapeParameter sp(lambda);
  if (sp.regime == Regime::Zero) throw RegimeError("m_lambda: lambda must be nonzero");

  static std::map<double, double> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  const auto it = cache.find(lambda);
  if (it != cache.end()) return it->second;

  auto g = [lambda](double x) {
    return std::fabs(shape_poly(lambda, x)) * gumbel_cdf(x) * std::exp(-x);
  };
  // The maximizer sits at O(1) x for every lambda; [-5, 25] is generous.
  constexpr int kScan = 2001;
  double best = -1.0;
  int besti = 1;
  for (int i = 0; i < kScan; ++i) {
    const double x = -5.0 + 30.0 * i / (kScan - 1);
    const double v = g(x);
    if (v > best) {
      best = v;
      besti = i;
    }
  }
  const double xlo = -5.0 + 30.0 * std::max(0, besti - 1) / (kScan - 1);
  const double xhi = -5.0 + 30.0 * std::min(kScan - 1, besti + 1) / (kScan - 1);
  const double m = golden_max(g, xlo, xhi, 1e-10).value;
  cache.emplace(lambda, m);
  return m;
}

ProofDiagnostics proof_diagnostics(double lambda, double n, double x) {
  if (!std::isfinite(x)) throw std::domain_error("proof_diagnostics: non-finite x");
  const ShapeParameter sp(lambda);
  const NormingConstants nc = solve_constants(lambda, n);

  const LogScaledValue s = survival(sp, nc.b_n + nc.a_n * x).value;
  const double sd = s.sign == 0 ? 0.0 : std::exp(s.log_magnitude);
  // n * psi in log scale: survives even when psi itself underflows.
  const double npsi = s.sign == 0 ? 0.0 : std::exp(s.log_magnitude + std::log(n));
  double r;
  if (sd >= 1e-8)
    r = n * (-std::log1p(-sd) - sd);
  else
    r = n * sd * sd * (0.5 + sd / 3.0 + sd * sd / 4.0);
  const double h = -npsi + std::exp(-x);

  ProofDiagnostics out;
  out.x = x;
  out.psi = s;
  out.r = r;
  out.h = h;
  out.a_big = std::exp(h);
  out.b_big = std::exp(-r);

  const AuxSequences aux = aux_sequences(nc);
  out.bounds_applicable = false;
  out.psi_bound_pass = true;
  out.r_bound_pass = true;
  if (sp.regime == Regime::Positive) {
    out.bounds_applicable = n >= 9.0 && !aux.below_n0 && x > -aux.value;
    if (out.bounds_applicable) {
      out.psi_bound_pass = sd < 0.1887;
      out.r_bound_pass = r < 0.39 * nc.a_n * nc.a_n;
    }
  } else if (sp.regime == Regime::Negative) {
    out.bounds_applicable = !aux.below_n0 && aux.value > 0.0 && x > -aux.value;
    if (out.bounds_applicable) out.psi_bound_pass = sd < 0.332667;
  }
  return out;
}

RateCurve rate_curve(double lambda, const std::vector<std::int64_t>& n_grid, Exec exec) {
  const ShapeParameter sp(lambda);
  if (n_grid.empty()) throw std::domain_error("rate_curve: empty n grid");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw std::domain_error("rate_curve: n < 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw std::domain_error("rate_curve: n grid must be strictly increasing");
  }
  if (sp.regime == Regime::Negative && n_grid.front() < n_zero(lambda))
    throw RegimeError("rate_curve: grid starts below the negative-regime start index");

  const std::int64_t m = static_cast<std::int64_t>(n_grid.size());
  RateCurve rc;
  rc.lambda = lambda;
  rc.points.resize(n_grid.size());

  std::exception_ptr err = nullptr;
  std::mutex err_mu;
  for_each_index(m, exec, [&](std::int64_t i) {
    try {
      rc.points[static_cast<std::size_t>(i)] =
          sup_distance(lambda, static_cast<double>(n_grid[static_cast<std::size_t>(i)]));
    } catch (...) {
      const std::lock_guard<std::mutex> lock(err_mu);
      if (!err) err = std::current_exception();
    }
  });
  if (err) std::rethrow_exception(err);

  rc.band_min = HUGE_VAL;
  rc.band_max = -HUGE_VAL;
  for (const DistanceReport& p : rc.points) {
    rc.band_min = std::min(rc.band_min, p.delta_times_log_n);
    rc.band_max = std::max(rc.band_max, p.delta_times_log_n);
  }

  if (sp.regime != Regime::Zero) {
    const double big_m = m_lambda(lambda);
    rc.predicted.resize(n_grid.size());
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      const NormingConstants nc = solve_constants(lambda, static_cast<double>(n_grid[i]));
      rc.predicted[i] = nc.a_n * nc.a_n * big_m;
    }
    const double cutoff = static_cast<double>(n_grid.back()) / 10.0;
    rc.top_decade_max_rel_dev = 0.0;
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      if (static_cast<double>(n_grid[i]) < cutoff) continue;
      rc.top_decade_max_rel_dev = std::max(
          rc.top_decade_max_rel_dev, std::fabs(rc.points[i].delta_n / rc.predicted[i] - 1.0));
    }
  }
  return rc;
}

double monte_carlo_check(double lambda, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                         Exec exec) {
  const ShapeParameter sp(lambda);
  if (n < 2) throw std::domain_error("monte_carlo_check: n < 2");
  if (reps < 1000) throw std::domain_error("monte_carlo_check: reps < 1000");
  if (static_cast<double>(reps) * static_cast<double>(n) > 4e9)
    throw std::domain_error("monte_carlo_check: reps * n above the 4e9 draw budget");

  const NormingConstants nc = solve_constants(lambda, n);
  const double delta = lambda / std::sqrt(1.0 + lambda * lambda);
  const double codelta = std::sqrt(1.0 - delta * delta);
  const std::uint64_t master = detail::mix64(seed);

  std::vector<double> norm_max(static_cast<std::size_t>(reps));
  for_each_index(reps, exec, [&](std::int64_t rep) {
    const std::uint64_t key =
        detail::mix64(master + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(rep + 1));
    double mx = -HUGE_VAL;
    for (std::int64_t i = 0; i < n; ++i)
      mx = std::max(mx, detail::sn_draw(delta, codelta, key, static_cast<std::uint64_t>(i)));
    norm_max[static_cast<std::size_t>(rep)] = (mx - nc.b_n) / nc.a_n;
  });

  std::sort(norm_max.begin(), norm_max.end());
  const double total = static_cast<double>(reps);
  double ks = 0.0;
  for (std::int64_t i = 0; i < reps; ++i) {
    const double f = gumbel_cdf(norm_max[static_cast<std::size_t>(i)]);
    const double hi = static_cast<double>(i + 1) / total - f;
    const double lo = f - static_cast<double>(i) / total;
    ks = std::max(ks, std::max(hi, lo));
  }
  return ks;
}

double dkw_epsilon(double alpha, double m) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("dkw_epsilon: alpha outside (0,1)");
  if (!(m > 0.0)) throw std::domain_error("dkw_epsilon: m must be positive");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * m));
}

}  // namespace snev
