#include "kyfan/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "kyfan/json_io.hpp"

namespace kyfan {

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  std::string name;
  std::string model;
  std::optional<std::int64_t> n, m, n_max, m_max, N, a, base, depth, window, samples;
  std::optional<double> alpha, delta, eps;
  std::optional<std::string> seq, norm;
  std::uint64_t seed = 0;
  double tol_abs = Tolerance{}.abs;
  double tol_rel = Tolerance{}.rel;
  std::string format = "json";
  std::string out_path;
  int workers = 1;

  [[nodiscard]] Tolerance tol() const { return {tol_abs, tol_rel}; }
};

/// One column-oriented series for CSV output.
struct Series {
  std::vector<double> index;
  std::vector<double> value;
  std::vector<double> bound;  // optional third column
};

struct Outcome {
  Json params = Json::object();
  Json results = Json::array();
  double worst_residual = 0.0;
  std::int64_t failures = 0;
  std::optional<Series> series;
};

std::int64_t need(const std::optional<std::int64_t>& v, const char* flag) {
  if (!v) throw ConfigError(std::string("missing required flag ") + flag);
  return *v;
}

template <class T>
T get_or(const std::optional<T>& v, T fallback) {
  return v ? *v : fallback;
}

std::optional<NormingSequence> norming(const Options& o) {
  if (!o.delta) return std::nullopt;
  return NormingSequence::power(*o.delta);
}

void account(Outcome& out, const CheckReport& r) {
  out.results.push_back(to_json(r));
  out.worst_residual = std::max(out.worst_residual, r.residual);
  if (!r.passed()) ++out.failures;
}

// ---- commands ----

Outcome cmd_validate(const StationaryModel& model, const Options& o) {
  Outcome out;
  const auto window = get_or<std::int64_t>(o.window, 64);
  out.params = {{"window", window}};
  const auto report = validate(model, window);
  out.results.push_back(to_json(report));
  out.worst_residual = std::max(0.0, -report.min_eigenvalue);
  if (!report.pass) ++out.failures;
  return out;
}

Outcome cmd_check(const StationaryModel& model, const Options& o) {
  Outcome out;
  const auto check = parse_check_name(o.name);
  const auto n = need(o.n, "--n"), m = need(o.m, "--m");
  out.params = {{"name", to_string(check)}, {"n", n}, {"m", m}};
  if (o.delta) out.params["delta"] = *o.delta;
  GramEngine engine(model);
  account(out, run_check(engine, check, n, m, norming(o), o.tol()));
  return out;
}

Outcome cmd_scan(const StationaryModel& model, const Options& o) {
  Outcome out;
  ScanOptions so;
  so.check = parse_check_name(o.name);
  so.n_max = get_or<std::int64_t>(o.n_max, 64);
  so.m_max = get_or<std::int64_t>(o.m_max, 64);
  so.samples = get_or<std::int64_t>(o.samples, 0);
  so.seed = o.seed;
  so.alpha = norming(o);
  so.tol = o.tol();
  so.workers = o.workers;
  out.params = {{"name", to_string(so.check)}, {"n_max", so.n_max}, {"m_max", so.m_max},
                {"samples", so.samples},       {"seed", so.seed}};
  if (o.delta) out.params["delta"] = *o.delta;
  const auto report = scan(model, so);
  out.results.push_back(to_json(report));
  out.worst_residual = report.worst_residual;
  out.failures = report.failures + report.errors;
  return out;
}

Outcome cmd_fekete(const StationaryModel& model, const Options& o) {
  Outcome out;
  const auto N = get_or<std::int64_t>(o.N, 100);
  const auto spot = get_or<std::int64_t>(o.samples, 16);
  out.params = {{"N", N}, {"samples", spot}, {"seed", o.seed}};
  GramEngine engine(model);
  // g_n = ||S_n||^2 / n, so g_n / n = ||S_n / n||^2.
  const auto trace = fekete_limit(
      [&engine](std::int64_t n) { return engine.sum_norm_sq(n) / static_cast<double>(n); }, N, spot,
      o.seed, o.tol());
  out.results.push_back(to_json(trace));
  Series s;
  for (std::int64_t n = 1; n <= N; ++n) s.index.push_back(static_cast<double>(n));
  s.value = trace.values;
  s.bound = trace.running_inf;
  out.series = std::move(s);
  return out;
}

Outcome cmd_cesaro(const StationaryModel& model, const Options& o) {
  Outcome out;
  const auto N = get_or<std::int64_t>(o.N, 1024);
  out.params = {{"N", N}};
  GramEngine engine(model);
  const auto report = cesaro_limit(engine, N, o.tol());
  out.results.push_back(to_json(report));
  out.worst_residual = report.agreement;
  if (report.stationary && !report.trend_nonincreasing) ++out.failures;
  Series s;
  for (const auto& p : report.trend) {
    s.index.push_back(static_cast<double>(p.N));
    s.value.push_back(p.lim_estimate);
    s.bound.push_back(p.inf_estimate);
  }
  out.series = std::move(s);
  return out;
}

Outcome cmd_project(const StationaryModel& model, const Options& o) {
  const auto* orbit = std::get_if<OperatorOrbitModel>(&model);
  if (orbit == nullptr) throw ConfigError("asymp.project requires an orbit model");
  Outcome out;
  const auto N = get_or<std::int64_t>(o.N, 1024);
  out.params = {{"N", N}};
  const auto report = fixed_space_projection(*orbit, N, o.tol());
  out.results.push_back(to_json(report));
  out.worst_residual = report.riesz_angle;
  if (!report.rate_bound_holds) ++out.failures;
  if (report.riesz_angle > 1e-9) ++out.failures;
  Series s;
  for (std::size_t i = 0; i < report.schedule.size(); ++i) {
    const auto n = static_cast<double>(report.schedule[i]);
    s.index.push_back(n);
    s.value.push_back(report.residuals[i]);
    s.bound.push_back(report.rate_constant / n);
  }
  out.series = std::move(s);
  return out;
}

Outcome cmd_dlim(const StationaryModel& model, const Options& o) {
  Outcome out;
  const auto N = get_or<std::int64_t>(o.N, 10000);
  const double eps = get_or(o.eps, 0.05);
  out.params = {{"N", N}, {"eps", eps}};
  DensityReport report;
  if (o.seq) {
    // indicator of the index set
    const auto seq = IndexSequence::parse(*o.seq);
    out.params["seq"] = seq.describe();
    std::vector<char> member(static_cast<std::size_t>(N) + 1, 0);
    for (std::int64_t k = 1;; ++k) {
      if (seq.size() && k > *seq.size()) break;
      const auto v = seq.at(k);
      if (v > N) break;
      member[static_cast<std::size_t>(v)] = 1;
    }
    report = density_limit([&member](std::int64_t k) { return member[static_cast<std::size_t>(k)] ? 1.0 : 0.0; },
                           N, eps);
  } else {
    out.params["sequence"] = "|gamma(k)|";
    report = density_limit([&model](std::int64_t k) { return std::abs(covariance_of(model, k)); }, N, eps);
  }
  out.results.push_back(to_json(report));
  return out;
}

Outcome cmd_ratio(const StationaryModel& model, const Options& o) {
  Outcome out;
  const auto n = need(o.n, "--n"), m = need(o.m, "--m");
  out.params = {{"a", n}, {"b", n + m}};
  GramEngine engine(model);
  const auto term = ratio_with_decomposition(engine, n, n + m, o.tol());
  out.results.push_back({{"a", n},
                         {"b", n + m},
                         {"ratio", term.ratio},
                         {"decomposition", term.decomposition},
                         {"residual", term.residual},
                         {"tolerance", term.tolerance}});
  out.worst_residual = term.residual;
  if (engine.stationary() && term.residual > term.tolerance) ++out.failures;
  return out;
}

Outcome cmd_sum(const StationaryModel& model, const Options& o) {
  if (!o.seq) throw ConfigError("missing required flag --seq");
  Outcome out;
  const auto seq = IndexSequence::parse(*o.seq);
  const auto N = need(o.N, "--N");
  const auto norm = parse_normalization(get_or<std::string>(o.norm, "by_nN"));
  out.params = {{"seq", seq.describe()}, {"N", N}, {"norm", to_string(norm)}};
  GramEngine engine(model);
  const auto report = ratio_sum(engine, seq, N, norm, o.tol());
  out.results.push_back(to_json(report));
  out.worst_residual = std::max(report.telescoping_residual, report.decomposition_residual);
  if (!report.identity_holds) ++out.failures;
  Series s;
  for (std::size_t k = 0; k < report.ratios.size(); ++k) {
    s.index.push_back(static_cast<double>(k + 1));
    s.value.push_back(report.ratios[k]);
  }
  out.series = std::move(s);
  return out;
}

Outcome cmd_arith(const StationaryModel& model, const Options& o) {
  Outcome out;
  const auto a = need(o.a, "--a"), N = need(o.N, "--N");
  out.params = {{"a", a}, {"N", N}};
  GramEngine engine(model);
  const auto report = arithmetic_identity(engine, a, N, o.tol());
  out.results.push_back(to_json(report));
  out.worst_residual = report.check.residual;
  if (!report.check.passed()) ++out.failures;
  return out;
}

Outcome cmd_chain(const StationaryModel& model, const Options& o) {
  Outcome out;
  const auto base = get_or<std::int64_t>(o.base, 2);
  const auto depth = get_or<std::int64_t>(o.depth, 20);
  out.params = {{"base", base}, {"depth", depth}};
  GramEngine engine(model);
  const auto report = chain_series(engine, ChainSpec::geometric(base, depth), depth, o.tol());
  out.results.push_back(to_json(report));
  for (double r : report.residuals) out.worst_residual = std::max(out.worst_residual, r);
  if (!report.residuals_ok || !report.partial_sums_nondecreasing) ++out.failures;
  Series s;
  for (std::size_t j = 0; j < report.partial_sums.size(); ++j) {
    s.index.push_back(static_cast<double>(j + 1));
    s.value.push_back(report.partial_sums[j]);
    s.bound.push_back(report.telescoped[j]);
  }
  out.series = std::move(s);
  return out;
}

Outcome cmd_frac_apply(const StationaryModel& model, const Options& o) {
  Outcome out;
  const double alpha = get_or(o.alpha, 0.5);
  out.params = {{"alpha", alpha}};
  out.results.push_back(to_json(apply_fractional(model, alpha)));
  return out;
}

Outcome cmd_frac_decay(const StationaryModel& model, const Options& o) {
  Outcome out;
  const double alpha = get_or(o.alpha, 0.5);
  const auto N = get_or<std::int64_t>(o.N, 1024);
  const double eps = get_or(o.eps, 0.05);
  out.params = {{"alpha", alpha}, {"N", N}, {"eps", eps}};
  const auto trace = decay_trace(apply_fractional(model, alpha), N, eps, o.tol());
  out.results.push_back(to_json(trace));
  if (!trace.vanishing) ++out.failures;
  Series s;
  for (const auto& p : trace.points) {
    s.index.push_back(static_cast<double>(p.n));
    s.value.push_back(p.value);
    s.bound.push_back(p.envelope);
  }
  out.series = std::move(s);
  return out;
}

Outcome cmd_frac_series(const StationaryModel& model, const Options& o) {
  Outcome out;
  const auto N = get_or<std::int64_t>(o.N, std::int64_t{1} << 14);
  out.params = {{"N", N}};
  StationaryModel target = model;
  if (o.alpha) {
    out.params["alpha"] = *o.alpha;
    target = apply_fractional(model, *o.alpha).transformed;
  }
  const auto report = membership_series(target, N);
  out.results.push_back(to_json(report));
  Series s;
  for (const auto& p : report.points) {
    s.index.push_back(static_cast<double>(p.N));
    s.value.push_back(p.partial_sum);
  }
  out.series = std::move(s);
  return out;
}

Outcome cmd_fsup_table(const StationaryModel& model, const Options& o) {
  Outcome out;
  const auto N = get_or<std::int64_t>(o.N, 64);
  out.params = {{"N", N}};
  GramEngine engine(model);
  FSupTable table(engine);
  std::vector<double> values;
  std::vector<std::int64_t> argmax;
  Series s;
  for (std::int64_t n = 1; n <= N; ++n) {
    values.push_back(table.f_sq(n));
    argmax.push_back(table.argmax(n));
    s.index.push_back(static_cast<double>(n));
    s.value.push_back(values.back());
    s.bound.push_back(engine.sum_norm_sq(n) / static_cast<double>(n));
  }
  out.results.push_back({{"f_sq", values}, {"argmax", argmax}});
  out.series = std::move(s);
  return out;
}

Outcome cmd_fsup_subadd(const StationaryModel& model, const Options& o) {
  Outcome out;
  const auto n_max = get_or<std::int64_t>(o.n_max, 256);
  out.params = {{"n_max", n_max}};
  GramEngine engine(model);
  const auto report = subadditivity_scan(engine, n_max, o.tol());
  out.results.push_back(to_json(report));
  out.worst_residual = std::max(0.0, -report.worst_slack);
  out.failures = report.failures;
  return out;
}

Outcome cmd_fsup_iratio(const StationaryModel& model, const Options& o) {
  Outcome out;
  GramEngine engine(model);
  if (o.n || o.m) {
    const auto x = need(o.n, "--n"), y = need(o.m, "--m");
    out.params = {{"x", x}, {"y", y}};
    FSupTable table(engine);
    const auto r = prop_iratio(table, x, y, o.tol());
    out.results.push_back(to_json(r));
    out.worst_residual = std::max(0.0, r.I - r.stated_bound);
    if (!r.stated_bound_holds || !r.subadditivity_holds) ++out.failures;
    return out;
  }
  const auto max_xy = get_or<std::int64_t>(o.n_max, 200);
  out.params = {{"n_max", max_xy}};
  const auto s = iratio_scan(engine, max_xy, o.tol());
  out.results.push_back(to_json(s));
  if (s.condition_pairs > 0) out.worst_residual = std::max(0.0, s.worst_stated_excess);
  out.failures = s.stated_violations + s.subadditivity_violations;
  return out;
}

using Handler = std::function<Outcome(const StationaryModel&, const Options&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"validate", cmd_validate},       {"check", cmd_check},
      {"scan", cmd_scan},               {"asymp.fekete", cmd_fekete},
      {"asymp.cesaro", cmd_cesaro},     {"asymp.project", cmd_project},
      {"asymp.dlim", cmd_dlim},         {"diag.ratio", cmd_ratio},
      {"diag.sum", cmd_sum},            {"diag.arith", cmd_arith},
      {"diag.chain", cmd_chain},        {"frac.apply", cmd_frac_apply},
      {"frac.decay", cmd_frac_decay},   {"frac.series", cmd_frac_series},
      {"fsup.table", cmd_fsup_table},   {"fsup.subadd", cmd_fsup_subadd},
      {"fsup.iratio", cmd_fsup_iratio},
  };
  return table;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const Series& s, std::ostream& os) {
  const bool with_bound = !s.bound.empty();
  os << (with_bound ? "index,value,bound\n" : "index,value\n");
  for (std::size_t i = 0; i < s.index.size(); ++i) {
    os << format_number(s.index[i]) << ',' << format_number(s.value[i]);
    if (with_bound) os << ',' << format_number(s.bound[i]);
    os << '\n';
  }
}

void build_app(CLI::App& app, Options& o) {
  app.add_option("command", o.command, "command to run")->required();
  app.add_option("name", o.name, "check name for check/scan");
  app.add_option("--model", o.model, "model spec: JSON file path or inline JSON")->required();
  app.add_option("--n", o.n, "first index n (x for fsup.iratio)");
  app.add_option("--m", o.m, "offset m (y for fsup.iratio)");
  app.add_option("--n-max", o.n_max, "grid bound for scans");
  app.add_option("--m-max", o.m_max, "grid bound for scans");
  app.add_option("--N", o.N, "horizon or number of sequence terms");
  app.add_option("--a", o.a, "progression step for diag.arith");
  app.add_option("--alpha", o.alpha, "fractional exponent in (0, 1)");
  app.add_option("--delta", o.delta, "norming exponent, alpha_n = n^delta");
  app.add_option("--seq", o.seq, "arithmetic:A | geometric:B | squares | list:1,2,5 | file:PATH");
  app.add_option("--base", o.base, "chain ratio");
  app.add_option("--depth", o.depth, "chain depth");
  app.add_option("--window", o.window, "PSD window for validate");
  app.add_option("--samples", o.samples, "random cells for scan (0 = exhaustive)");
  app.add_option("--norm", o.norm, "by_nN | by_count");
  app.add_option("--eps", o.eps, "threshold for asymp.dlim and frac.decay");
  app.add_option("--seed", o.seed, "64-bit seed for sampling");
  app.add_option("--tol-abs", o.tol_abs);
  app.add_option("--tol-rel", o.tol_rel);
  app.add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out_path);
  app.add_option("--workers", o.workers)->check(CLI::Range(1, 256));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"kyfan-lab: partial-sum identities and diagnostics for stationary sequences",
               "kyfan_lab"};
  Options o;
  build_app(app, o);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const auto it = handlers().find(o.command);
  if (it == handlers().end()) {
    err << "error: unknown command '" << o.command << "'\n";
    return kExitConfigError;
  }
  const bool named = o.command == "check" || o.command == "scan";
  if (named && o.name.empty()) {
    err << "error: " << o.command << " needs a check name\n";
    return kExitConfigError;
  }
  if (!named && !o.name.empty()) {
    err << "error: unexpected argument '" << o.name << "'\n";
    return kExitConfigError;
  }

  Outcome outcome;
  StationaryModel model;
  try {
    model = load_model(o.model);
    outcome = it->second(model, o);
  } catch (const ModelError& e) {
    err << "error: model " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  std::ostringstream text;
  if (o.format == "csv") {
    if (!outcome.series) {
      err << "error: " << o.command << " produces no series; use --format json\n";
      return kExitConfigError;
    }
    write_csv(*outcome.series, text);
  } else {
    Json params = outcome.params;
    params["tol_abs"] = o.tol_abs;
    params["tol_rel"] = o.tol_rel;
    Json report{{"command", named ? o.command + " " + o.name : o.command},
                {"model", model_to_json(model)},
                {"params", params},
                {"results", outcome.results},
                {"summary", {{"worst_residual", outcome.worst_residual}, {"failures", outcome.failures}}}};
    text << report.dump(2) << '\n';
  }

  if (o.out_path.empty()) {
    out << text.str();
  } else {
    std::ofstream file(o.out_path, std::ios::binary);
    if (!(file << text.str())) {
      err << "error: cannot write " << o.out_path << '\n';
      return kExitConfigError;
    }
  }
  return outcome.failures == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace kyfan
