#include <charconv>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "snev/convergence.hpp"
#include "snev/errors.hpp"
#include "snev/norming.hpp"
#include "snev/skew_normal.hpp"
#include "snev/special_fn.hpp"
#include "output.hpp"

using nlohmann::json;
using namespace snev;
using namespace snev::cli;

namespace {

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};

struct OutputOpts {
  std::string format = "csv";
  std::string out;
};

int emit(const OutputOpts& opts, const std::string& command, const json& params,
         const std::vector<std::string>& columns, const std::vector<json>& records,
         const json& summary = json()) {
  if (opts.format == "json") {
    json doc;
    doc["schema_version"] = 1;
    doc["command"] = command;
    doc["params"] = params;
    doc["results"] = records;
    if (!summary.is_null()) doc["summary"] = summary;
    write_text(opts.out, doc.dump(2) + "\n");
  } else {
    write_text(opts.out, to_csv(columns, records));
  }
  return 0;
}

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e)
    throw UsageError(std::string("malformed ") + what + ": '" + s + "'");
  return v;
}

// "lo:hi:count" -> count linearly spaced points.
std::vector<double> parse_linear_grid(const std::string& spec) {
  const auto p1 = spec.find(':');
  const auto p2 = spec.find(':', p1 == std::string::npos ? p1 : p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos)
    throw UsageError("grid spec must be lo:hi:count, got '" + spec + "'");
  const double lo = parse_double(spec.substr(0, p1), "grid lo");
  const double hi = parse_double(spec.substr(p1 + 1, p2 - p1 - 1), "grid hi");
  const double cnt = parse_double(spec.substr(p2 + 1), "grid count");
  if (!(cnt >= 2.0) || cnt != std::floor(cnt) || cnt > 1e7)
    throw UsageError("grid count must be an integer in [2, 1e7]");
  if (!(hi > lo)) throw UsageError("grid needs hi > lo");
  const int n = static_cast<int>(cnt);
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
  return xs;
}

// "start:stop:ratio" -> geometric ladder rounded to strictly increasing integers.
std::vector<std::int64_t> parse_geometric_grid(const std::string& spec) {
  const auto p1 = spec.find(':');
  const auto p2 = spec.find(':', p1 == std::string::npos ? p1 : p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos)
    throw UsageError("n-grid spec must be start:stop:ratio, got '" + spec + "'");
  const double start = parse_double(spec.substr(0, p1), "n-grid start");
  const double stop = parse_double(spec.substr(p1 + 1, p2 - p1 - 1), "n-grid stop");
  const double ratio = parse_double(spec.substr(p2 + 1), "n-grid ratio");
  if (!(start >= 2.0)) throw UsageError("n-grid start must be >= 2");
  if (!(stop >= start)) throw UsageError("n-grid needs stop >= start");
  if (!(ratio > 1.0)) throw UsageError("n-grid ratio must be > 1");
  std::vector<std::int64_t> ns;
  std::int64_t last = 0;
  for (double g = start; g <= stop * (1.0 + 1e-12); g *= ratio) {
    const std::int64_t n = std::llround(g);
    if (n > last) {
      ns.push_back(n);
      last = n;
    }
  }
  return ns;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Positive: return "positive";
    case Regime::Zero: return "zero";
    case Regime::Negative: return "negative";
  }
  return "?";
}

json log_scaled_json(const LogScaledValue& v) {
  if (v.sign == 0) return nullptr;
  return v.log_magnitude;
}

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

int cmd_constants(double lambda, double n, const OutputOpts& opts) {
  const NormingConstants nc = solve_constants(lambda, n);
  const AuxSequences aux = aux_sequences(nc);
  json rec;
  rec["lambda"] = nc.lambda;
  rec["n"] = nc.n;
  rec["regime"] = regime_name(nc.regime);
  rec["b_n"] = nc.b_n;
  rec["a_n"] = nc.a_n;
  rec["residual"] = nc.residual;
  rec["aux_loglog"] = aux.below_n0 ? json("below n0") : json(aux.value);
  const json params = {{"lambda", lambda}, {"n", n}};
  return emit(opts, "constants", params,
              {"lambda", "n", "regime", "b_n", "a_n", "residual", "aux_loglog"}, {rec});
}

int cmd_dist(double lambda, const std::vector<double>& xs, bool expansion,
             const OutputOpts& opts) {
  const ShapeParameter sp(lambda);
  std::vector<json> records;
  records.reserve(xs.size());
  for (double x : xs) {
    const SurvivalEvaluation se = survival(sp, x);
    json rec;
    rec["lambda"] = lambda;
    rec["x"] = x;
    rec["pdf"] = pdf(sp, x);
    rec["cdf"] = cdf(sp, x);
    rec["log_survival"] = log_scaled_json(se.value);
    rec["method"] = se.method == SurvivalMethod::DirectOwen ? "direct_owen" : "log_tail";
    if (expansion) {
      const LogScaledValue e0 = tail_expansion(sp, x, 0);
      const LogScaledValue e1 = tail_expansion(sp, x, 1);
      const MillsBracket br = mills_bracket(sp, x);
      rec["log_tail_order0"] = log_scaled_json(e0);
      rec["log_tail_order1"] = log_scaled_json(e1);
      rec["tail_order1_sign"] = e1.sign;
      rec["log_bracket_lower"] = br.lower_positive ? json(br.lower.log_magnitude) : json();
      rec["bracket_lower_positive"] = br.lower_positive;
      rec["log_bracket_upper"] = log_scaled_json(br.upper);
    }
    records.push_back(std::move(rec));
  }
  std::vector<std::string> cols = {"lambda", "x", "pdf", "cdf", "log_survival", "method"};
  if (expansion) {
    cols.insert(cols.end(), {"log_tail_order0", "log_tail_order1", "tail_order1_sign",
                             "log_bracket_lower", "bracket_lower_positive", "log_bracket_upper"});
  }
  const json params = {{"lambda", lambda}, {"expansion", expansion}};
  return emit(opts, "dist", params, cols, records);
}

int cmd_maxdist(double lambda, double n, const std::vector<double>& xs, const OutputOpts& opts) {
  const json params = {{"lambda", lambda}, {"n", n}};
  if (xs.empty()) {
    const DistanceReport dr = sup_distance(lambda, n);
    json rec;
    rec["lambda"] = dr.lambda;
    rec["n"] = dr.n;
    rec["delta_n"] = dr.delta_n;
    rec["argmax_x"] = dr.argmax_x;
    rec["delta_times_log_n"] = dr.delta_times_log_n;
    rec["bracket_width"] = dr.bracket_width;
    return emit(opts, "maxdist", params,
                {"lambda", "n", "delta_n", "argmax_x", "delta_times_log_n", "bracket_width"},
                {rec});
  }
  std::vector<json> records;
  records.reserve(xs.size());
  for (double x : xs) {
    const double fn = max_cdf(lambda, n, x);
    const ProofDiagnostics pd = proof_diagnostics(lambda, n, x);
    json rec;
    rec["lambda"] = lambda;
    rec["n"] = n;
    rec["x"] = x;
    rec["f_n"] = fn;
    rec["gumbel"] = gumbel_cdf(x);
    rec["diff"] = fn - gumbel_cdf(x);
    rec["log_psi"] = log_scaled_json(pd.psi);
    rec["r"] = pd.r;
    rec["h"] = pd.h;
    rec["a_big"] = pd.a_big;
    rec["b_big"] = pd.b_big;
    rec["bounds_applicable"] = pd.bounds_applicable;
    rec["psi_bound_pass"] = pd.psi_bound_pass;
    rec["r_bound_pass"] = pd.r_bound_pass;
    records.push_back(std::move(rec));
  }
  return emit(opts, "maxdist", params,
              {"lambda", "n", "x", "f_n", "gumbel", "diff", "log_psi", "r", "h", "a_big", "b_big",
               "bounds_applicable", "psi_bound_pass", "r_bound_pass"},
              records);
}

int cmd_ratecurve(double lambda, const std::string& grid_spec, const std::string& plot,
                  const OutputOpts& opts) {
  const std::vector<std::int64_t> grid = parse_geometric_grid(grid_spec);
  const RateCurve rc = rate_curve(lambda, grid);

  json summary;
  summary["band_min"] = rc.band_min;
  summary["band_max"] = rc.band_max;
  summary["band_ratio"] = rc.band_max / rc.band_min;
  if (!rc.predicted.empty()) summary["top_decade_max_rel_dev"] = rc.top_decade_max_rel_dev;

  std::vector<json> records;
  records.reserve(rc.points.size());
  for (std::size_t i = 0; i < rc.points.size(); ++i) {
    const DistanceReport& p = rc.points[i];
    json rec;
    rec["lambda"] = p.lambda;
    rec["n"] = p.n;
    rec["delta_n"] = p.delta_n;
    rec["argmax_x"] = p.argmax_x;
    rec["delta_times_log_n"] = p.delta_times_log_n;
    rec["bracket_width"] = p.bracket_width;
    if (!rc.predicted.empty()) {
      rec["predicted"] = rc.predicted[i];
      rec["ratio_to_predicted"] = p.delta_n / rc.predicted[i];
    } else {
      rec["predicted"] = nullptr;
      rec["ratio_to_predicted"] = nullptr;
    }
    rec["band_min"] = rc.band_min;
    rec["band_max"] = rc.band_max;
    records.push_back(std::move(rec));
  }

  if (!plot.empty()) {
    SvgSeries measured{"delta * log n", {}, {}};
    SvgSeries predicted{"predicted * log n", {}, {}};
    for (std::size_t i = 0; i < rc.points.size(); ++i) {
      const double lx = std::log10(rc.points[i].n);
      measured.x.push_back(lx);
      measured.y.push_back(rc.points[i].delta_times_log_n);
      if (!rc.predicted.empty()) {
        predicted.x.push_back(lx);
        predicted.y.push_back(rc.predicted[i] * std::log(rc.points[i].n));
      }
    }
    std::vector<SvgSeries> series{measured};
    if (!predicted.x.empty()) series.push_back(predicted);
    write_text(plot, svg_chart("uniform distance rate, lambda=" + fmt_double(lambda), "log10 n",
                               "delta * log n", series));
  }

  const json params = {{"lambda", lambda}, {"n_grid", grid_spec}};
  return emit(opts, "ratecurve", params,
              {"lambda", "n", "delta_n", "argmax_x", "delta_times_log_n", "bracket_width",
               "predicted", "ratio_to_predicted", "band_min", "band_max"},
              records, summary);
}

struct VerifyOutcome {
  std::string name;
  bool pass;
  std::string detail;
};

// Strict bracket check lower < survival < upper on log-spaced x in
// [0.5, 50] wherever the lower bound is positive.
VerifyOutcome verify_bracket(double lambda) {
  const ShapeParameter sp(lambda);
  constexpr int kPts = 200;
  // grid starts just inside the region where the lower bound is positive
  const double coef = lambda > 0.0
                          ? 1.0 + 1.0 / (lambda * lambda * std::sqrt(2.0 * M_PI * M_E))
                          : std::pow(1.0 + lambda * lambda, 2) / (lambda * lambda);
  const double xlo = 1.000001 * std::sqrt(coef);
  int used = 0;
  double worst_lo = HUGE_VAL, worst_up = HUGE_VAL, worst_x = 0.0;
  bool ok = true;
  for (int i = 0; i < kPts; ++i) {
    const double x = xlo * std::pow(50.0 / xlo, static_cast<double>(i) / (kPts - 1));
    const MillsBracket br = mills_bracket(sp, x);
    if (!br.lower_positive) {
      ok = false;
      continue;
    }
    ++used;
    const double ls = survival(sp, x).value.log_magnitude;
    const double gap_lo = ls - br.lower.log_magnitude;
    const double gap_up = br.upper.log_magnitude - ls;
    if (std::min(gap_lo, gap_up) < std::min(worst_lo, worst_up)) worst_x = x;
    worst_lo = std::min(worst_lo, gap_lo);
    worst_up = std::min(worst_up, gap_up);
    if (!(gap_lo > 0.0) || !(gap_up > 0.0)) ok = false;
  }
  if (used < kPts) ok = false;
  return VerifyOutcome{"bracket lambda=" + fmt_double(lambda), ok,
                       "points=" + std::to_string(used) + " min_log_gap_lower=" +
                           fmt_double(worst_lo) + " min_log_gap_upper=" + fmt_double(worst_up) +
                           " at x=" + fmt_double(worst_x)};
}

VerifyOutcome verify_gaussian_bracket() {
  constexpr int kPts = 200;
  bool ok = true;
  double worst = HUGE_VAL, worst_x = 0.0;
  for (int i = 0; i < kPts; ++i) {
    const double x = 1.05 * std::pow(40.0 / 1.05, static_cast<double>(i) / (kPts - 1));
    const double log_up = normal_pdf_log(x).log_magnitude - std::log(x);
    const double log_lo = log_up + std::log1p(-1.0 / (x * x));
    const double ls = log_normal_sf(x);
    const double gap = std::min(ls - log_lo, log_up - ls);
    if (gap < worst) {
      worst = gap;
      worst_x = x;
    }
    if (!(ls > log_lo) || !(ls < log_up)) ok = false;
  }
  return VerifyOutcome{"bracket lambda=0", ok,
                       "points=200 min_log_gap=" + fmt_double(worst) + " at x=" +
                           fmt_double(worst_x)};
}

VerifyOutcome verify_bound_suite(double lambda) {
  const BoundSuiteReport rep = bound_suite(lambda, 1e6);
  std::string detail;
  for (const BoundCheck& c : rep.checks) {
    if (!detail.empty()) detail += "; ";
    detail += std::string(c.name) + "=" + fmt_double(c.max_observed) + (c.pass ? "<" : ">=") +
              fmt_double(c.bound);
  }
  return VerifyOutcome{"bound_suite lambda=" + fmt_double(lambda), rep.all_pass, detail};
}

VerifyOutcome verify_diagnostics(double lambda) {
  const std::vector<double> ns =
      lambda > 0.0 ? std::vector<double>{9, 20, 1e3, 1e6} : std::vector<double>{34, 100, 1e4, 1e6};
  bool ok = true;
  double worst_identity = 0.0;
  std::string witness;
  for (double n : ns) {
    const NormingConstants nc = solve_constants(lambda, n);
    const AuxSequences aux = aux_sequences(nc);
    for (int i = 1; i <= 25; ++i) {
      const double x = -aux.value + (10.0 + aux.value) * i / 25.0;
      const ProofDiagnostics pd = proof_diagnostics(lambda, n, x);
      const double fn = max_cdf(lambda, n, x);
      const double rebuilt = gumbel_cdf(x) * pd.a_big * pd.b_big;
      worst_identity = std::max(worst_identity, std::fabs(fn - rebuilt));
      if (!pd.bounds_applicable || !pd.psi_bound_pass || !pd.r_bound_pass ||
          std::fabs(fn - rebuilt) > 1e-10) {
        ok = false;
        if (witness.empty())
          witness = " witness n=" + fmt_double(n) + " x=" + fmt_double(x);
      }
    }
  }
  return VerifyOutcome{"diagnostics lambda=" + fmt_double(lambda), ok,
                       "max_identity_error=" + fmt_double(worst_identity) + witness};
}

int cmd_verify(const OutputOpts& opts) {
  std::vector<VerifyOutcome> outs;
  for (double lam : {0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0}) outs.push_back(verify_bracket(lam));
  outs.push_back(verify_gaussian_bracket());
  outs.push_back(verify_bound_suite(1.0));
  outs.push_back(verify_bound_suite(-1.0));
  outs.push_back(verify_diagnostics(1.0));
  outs.push_back(verify_diagnostics(-1.0));

  bool all = true;
  std::vector<json> records;
  for (const VerifyOutcome& o : outs) {
    all = all && o.pass;
    json rec;
    rec["check"] = o.name;
    rec["pass"] = o.pass;
    rec["detail"] = o.detail;
    records.push_back(std::move(rec));
  }
  emit(opts, "verify", json::object(), {"check", "pass", "detail"}, records,
       json{{"all_pass", all}});
  return all ? 0 : 2;
}

int cmd_simulate(double lambda, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                 const OutputOpts& opts) {
  const double ks = monte_carlo_check(lambda, n, reps, seed);
  const DistanceReport dr = sup_distance(lambda, static_cast<double>(n));
  const double eps = dkw_epsilon(1e-3, static_cast<double>(reps));
  const double bound = dr.delta_n + 3.0 * eps;
  const bool pass = ks <= bound;
  json rec;
  rec["lambda"] = lambda;
  rec["n"] = n;
  rec["reps"] = reps;
  rec["seed"] = seed;
  rec["ks_distance"] = ks;
  rec["delta_n"] = dr.delta_n;
  rec["dkw_epsilon"] = eps;
  rec["bound"] = bound;
  rec["pass"] = pass;
  const json params = {{"lambda", lambda}, {"n", n}, {"reps", reps}, {"seed", seed}};
  emit(opts, "simulate", params,
       {"lambda", "n", "reps", "seed", "ks_distance", "delta_n", "dkw_epsilon", "bound", "pass"},
       {rec});
  return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skew-normal extreme-value toolkit"};
  app.require_subcommand(1);

  OutputOpts opts;
  double lambda = 0.0;
  double n_real = 0.0;
  std::int64_t n_int = 0;
  std::int64_t reps = 0;
  std::uint64_t seed = 42;
  std::string n_grid, x_grid, plot;
  double x_single = 0.0;
  bool expansion = false;

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", opts.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", opts.out, "write the report to this file instead of stdout");
  };

  CLI::App* c_constants = app.add_subcommand("constants", "location/scale constants for one n");
  c_constants->add_option("--lambda", lambda, "shape parameter")->required();
  c_constants->add_option("--n", n_real, "sample size (real, >= 2)")->required();
  add_output(c_constants);

  CLI::App* c_dist = app.add_subcommand("dist", "pdf, cdf and tail-stable survival");
  c_dist->add_option("--lambda", lambda, "shape parameter")->required();
  CLI::Option* o_x = c_dist->add_option("--x", x_single, "single evaluation point");
  CLI::Option* o_xg = c_dist->add_option("--x-grid", x_grid, "lo:hi:count evaluation grid");
  o_x->excludes(o_xg);
  c_dist->add_flag("--expansion", expansion,
                   "add tail expansion orders 0/1 and the two-sided bracket (x > 0 only)");
  add_output(c_dist);

  CLI::App* c_maxdist = app.add_subcommand(
      "maxdist", "distribution of the normalized maximum against the Gumbel limit");
  c_maxdist->add_option("--lambda", lambda, "shape parameter")->required();
  c_maxdist->add_option("--n", n_real, "sample size (real, >= 2)")->required();
  CLI::Option* mo_x = c_maxdist->add_option("--x", x_single, "pointwise report at this x");
  CLI::Option* mo_xg = c_maxdist->add_option("--x-grid", x_grid, "lo:hi:count pointwise grid");
  mo_x->excludes(mo_xg);
  add_output(c_maxdist);

  CLI::App* c_rate = app.add_subcommand("ratecurve", "delta_n log n over a geometric n ladder");
  c_rate->add_option("--lambda", lambda, "shape parameter")->required();
  c_rate->add_option("--n-grid", n_grid, "start:stop:ratio geometric ladder")->required();
  c_rate->add_option("--plot", plot, "also write an SVG chart to this path");
  add_output(c_rate);

  CLI::App* c_verify = app.add_subcommand("verify", "run the fixed verification battery");
  add_output(c_verify);

  CLI::App* c_sim = app.add_subcommand("simulate", "Monte Carlo maxima against the Gumbel law");
  c_sim->add_option("--lambda", lambda, "shape parameter")->required();
  c_sim->add_option("--n", n_int, "draws per replicate")->required();
  c_sim->add_option("--reps", reps, "replicates (>= 1000)")->required();
  c_sim->add_option("--seed", seed, "RNG seed");
  add_output(c_sim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_constants->parsed()) return cmd_constants(lambda, n_real, opts);
    if (c_dist->parsed()) {
      std::vector<double> xs;
      if (o_x->count())
        xs.push_back(x_single);
      else if (o_xg->count())
        xs = parse_linear_grid(x_grid);
      else
        throw UsageError("dist needs --x or --x-grid");
      return cmd_dist(lambda, xs, expansion, opts);
    }
    if (c_maxdist->parsed()) {
      std::vector<double> xs;
      if (mo_x->count()) xs.push_back(x_single);
      if (mo_xg->count()) xs = parse_linear_grid(x_grid);
      return cmd_maxdist(lambda, n_real, xs, opts);
    }
    if (c_rate->parsed()) return cmd_ratecurve(lambda, n_grid, plot, opts);
    if (c_verify->parsed()) return cmd_verify(opts);
    if (c_sim->parsed()) return cmd_simulate(lambda, n_int, reps, seed, opts);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const RegimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
