#include "kyfan/checks.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "kyfan/sampling.hpp"
#include "kyfan/summation.hpp"

namespace kyfan {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::identity_pass: return "identity-pass";
    case Verdict::inequality_pass: return "inequality-pass";
    case Verdict::fail: return "fail";
    case Verdict::precondition_violation: return "precondition-violation";
  }
  return "?";
}

NormingSequence NormingSequence::linear() { return NormingSequence{}; }

NormingSequence NormingSequence::power(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in [0, 1]");
  NormingSequence s;
  s.kind_ = Kind::power;
  s.delta_ = delta;
  return s;
}

NormingSequence NormingSequence::table(std::vector<double> values) {
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("norming values must be positive");
  }
  NormingSequence s;
  s.kind_ = Kind::table;
  s.values_ = std::move(values);
  return s;
}

double NormingSequence::operator()(std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("norming index must be >= 1");
  switch (kind_) {
    case Kind::linear: return static_cast<double>(n);
    case Kind::power: return std::pow(static_cast<double>(n), delta_);
    case Kind::table:
      if (n > static_cast<std::int64_t>(values_.size())) {
        throw std::out_of_range("norming table has no entry " + std::to_string(n));
      }
      return values_[static_cast<std::size_t>(n - 1)];
  }
  return 0.0;
}

bool NormingSequence::subadditive_at(std::int64_t n, std::int64_t m, const Tolerance& tol) const {
  const double a = (*this)(n), b = (*this)(m), c = (*this)(n + m);
  return c <= a + b + tol.bound({a, b, c});
}

std::string NormingSequence::describe() const {
  switch (kind_) {
    case Kind::linear: return "linear";
    case Kind::power: return "power(" + std::to_string(delta_) + ")";
    case Kind::table: return "table(" + std::to_string(values_.size()) + ")";
  }
  return "?";
}

std::optional<double> NormingSequence::delta() const {
  if (kind_ == Kind::linear) return 1.0;
  if (kind_ == Kind::power) return delta_;
  return std::nullopt;
}

namespace {

CheckReport base_report(const char* name, GramEngine& engine, std::int64_t n, std::int64_t m) {
  if (n < 1 || m < 1) throw std::invalid_argument("n and m must be >= 1");
  CheckReport r;
  r.check = name;
  r.model = describe(engine.model());
  r.inputs["n"] = static_cast<double>(n);
  r.inputs["m"] = static_cast<double>(m);
  return r;
}

void decide_inequality(CheckReport& r) {
  r.residual = r.lhs - r.rhs;
  r.verdict = r.residual <= r.tolerance ? Verdict::inequality_pass : Verdict::fail;
}

// Condition ||S_{n+m} - S_n|| <= ||S_m|| at the queried pair.
bool increment_condition(GramEngine& engine, std::int64_t n, std::int64_t m, const Tolerance& tol,
                         CheckReport& r) {
  const double inc = engine.increment_norm_sq(n, m);
  const double sm = engine.sum_norm_sq(m);
  const double scale = std::max(sm, engine.sum_norm_sq(n + m));
  if (inc <= sm + tol.bound({scale})) return true;
  r.verdict = Verdict::precondition_violation;
  r.note = "increment condition fails at (n, m): ||S_{n+m}-S_n||^2 = " + std::to_string(inc) +
           " > ||S_m||^2 = " + std::to_string(sm);
  return false;
}

}  // namespace

CheckReport kyfan_identity(GramEngine& engine, std::int64_t n, std::int64_t m, const Tolerance& tol) {
  if (!engine.stationary()) {
    throw NotStationaryError("kyfan.identity requires a weakly stationary model; use kyfan.inequality");
  }
  CheckReport r = base_report("kyfan.identity", engine, n, m);
  const double dn = static_cast<double>(n), dm = static_cast<double>(m), dnm = dn + dm;
  const double a = engine.sum_norm_sq(n) / dn;
  const double b = engine.sum_norm_sq(m) / dm;
  const double c = engine.sum_norm_sq(n + m) / dnm;
  r.lhs = a + b - c;
  r.rhs = (dn * dnm / dm) * engine.normalized_diff_sq(n, m, dn, dnm);
  r.residual = std::abs(r.lhs - r.rhs);
  r.tolerance = tol.bound({r.lhs, r.rhs, a, b, c});
  r.verdict = r.residual <= r.tolerance ? Verdict::identity_pass : Verdict::fail;
  return r;
}

CheckReport kyfan_inequality(GramEngine& engine, std::int64_t n, std::int64_t m, const Tolerance& tol) {
  CheckReport r = base_report("kyfan.inequality", engine, n, m);
  const double dn = static_cast<double>(n), dm = static_cast<double>(m), dnm = dn + dm;
  const double a = engine.sum_norm_sq(n) / dn;
  const double b = engine.sum_norm_sq(m) / dm;
  const double c = engine.sum_norm_sq(n + m) / dnm;
  r.lhs = (dn * dnm / dm) * engine.normalized_diff_sq(n, m, dn, dnm);
  r.rhs = a + b - c;
  r.tolerance = tol.bound({r.lhs, r.rhs, a, b, c});
  r.residual = r.lhs - r.rhs;
  if (!increment_condition(engine, n, m, tol, r)) return r;
  decide_inequality(r);
  return r;
}

CheckReport lemma1_inequality(GramEngine& engine, const NormingSequence& alpha, std::int64_t n,
                              std::int64_t m, const Tolerance& tol) {
  CheckReport r = base_report("kyfan.lemma1", engine, n, m);
  if (auto d = alpha.delta()) r.inputs["delta"] = *d;
  const double an = alpha(n), am = alpha(m), anm = alpha(n + m);
  const double sn = engine.sum_norm_sq(n), sm = engine.sum_norm_sq(m), snm = engine.sum_norm_sq(n + m);
  r.lhs = (an * anm / am) * engine.normalized_diff_sq(n, m, an, anm);
  r.rhs = sn / an + sm / am - (snm / anm) * ((anm - an) / am);
  r.tolerance = tol.bound({r.lhs, r.rhs, sn / an, sm / am, snm / am});
  r.residual = r.lhs - r.rhs;
  if (!alpha.subadditive_at(n, m, tol)) {
    r.verdict = Verdict::precondition_violation;
    r.note = "norming sequence " + alpha.describe() + " not subadditive at (" + std::to_string(n) +
             ", " + std::to_string(m) + ")";
    return r;
  }
  if (!increment_condition(engine, n, m, tol, r)) return r;
  decide_inequality(r);
  return r;
}

CheckReport superadditivity_check(GramEngine& engine, std::int64_t n, std::int64_t m,
                                  const Tolerance& tol) {
  CheckReport r = base_report("kyfan.superadd", engine, n, m);
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  const double a = engine.sum_norm_sq(n) / dn;
  const double b = engine.sum_norm_sq(m) / dm;
  r.lhs = engine.sum_norm_sq(n + m) / (dn + dm);
  r.rhs = a + b;
  r.tolerance = tol.bound({r.lhs, r.rhs});
  decide_inequality(r);
  return r;
}

NamedCheck parse_check_name(std::string_view name) {
  if (name == "kyfan.identity") return NamedCheck::identity;
  if (name == "kyfan.inequality") return NamedCheck::inequality;
  if (name == "kyfan.lemma1") return NamedCheck::lemma1;
  if (name == "kyfan.superadd") return NamedCheck::superadd;
  throw std::invalid_argument("unknown check '" + std::string(name) + "'");
}

const char* to_string(NamedCheck check) {
  switch (check) {
    case NamedCheck::identity: return "kyfan.identity";
    case NamedCheck::inequality: return "kyfan.inequality";
    case NamedCheck::lemma1: return "kyfan.lemma1";
    case NamedCheck::superadd: return "kyfan.superadd";
  }
  return "?";
}

CheckReport run_check(GramEngine& engine, NamedCheck check, std::int64_t n, std::int64_t m,
                      const std::optional<NormingSequence>& alpha, const Tolerance& tol) {
  switch (check) {
    case NamedCheck::identity: return kyfan_identity(engine, n, m, tol);
    case NamedCheck::inequality: return kyfan_inequality(engine, n, m, tol);
    case NamedCheck::lemma1:
      return lemma1_inequality(engine, alpha.value_or(NormingSequence::linear()), n, m, tol);
    case NamedCheck::superadd: return superadditivity_check(engine, n, m, tol);
  }
  throw std::logic_error("unreachable");
}

namespace {

struct Cell {
  std::int64_t n = 0;
  std::int64_t m = 0;
};

struct CellResult {
  bool error = false;
  std::string message;
  CheckReport report;
};

}  // namespace

ScanReport scan(const StationaryModel& model, const ScanOptions& options) {
  if (options.n_max < 1 || options.m_max < 1) throw std::invalid_argument("n_max and m_max must be >= 1");

  std::vector<Cell> cells;
  if (options.samples <= 0) {
    cells.reserve(static_cast<std::size_t>(options.n_max * options.m_max));
    for (std::int64_t n = 1; n <= options.n_max; ++n) {
      for (std::int64_t m = 1; m <= options.m_max; ++m) cells.push_back({n, m});
    }
  } else {
    for (std::int64_t i = 0; i < options.samples; ++i) {
      const auto u = static_cast<std::uint64_t>(i);
      const auto rn = CounterRng::mix(options.seed, 1, 2 * u);
      const auto rm = CounterRng::mix(options.seed, 1, 2 * u + 1);
      cells.push_back({1 + static_cast<std::int64_t>(rn % static_cast<std::uint64_t>(options.n_max)),
                       1 + static_cast<std::int64_t>(rm % static_cast<std::uint64_t>(options.m_max))});
    }
  }

  std::vector<CellResult> results(cells.size());
  auto work = [&](std::size_t worker, std::size_t stride) {
    GramEngine engine(model);
    for (std::size_t i = worker; i < cells.size(); i += stride) {
      try {
        results[i].report = run_check(engine, options.check, cells[i].n, cells[i].m, options.alpha, options.tol);
      } catch (const std::exception& e) {
        results[i].error = true;
        results[i].message = "(" + std::to_string(cells[i].n) + ", " + std::to_string(cells[i].m) +
                             "): " + e.what();
      }
    }
  };

  const auto workers = static_cast<std::size_t>(std::max(1, options.workers));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  ScanReport report;
  report.check = to_string(options.check);
  report.model = describe(model);
  report.cells = static_cast<std::int64_t>(cells.size());
  report.worst_residual = -std::numeric_limits<double>::infinity();
  report.worst_excess = -std::numeric_limits<double>::infinity();
  CompensatedSum residual_sum;
  std::int64_t evaluated = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& res = results[i];
    if (res.error) {
      ++report.errors;
      if (report.error_messages.size() < options.keep_failures) report.error_messages.push_back(res.message);
      continue;
    }
    const auto& r = res.report;
    if (r.verdict == Verdict::precondition_violation) {
      ++report.precondition_violations;
      continue;
    }
    ++evaluated;
    residual_sum.add(r.residual);
    if (r.residual > report.worst_residual) {
      report.worst_residual = r.residual;
      report.worst_n = cells[i].n;
      report.worst_m = cells[i].m;
    }
    report.worst_excess = std::max(report.worst_excess, r.residual - r.tolerance);
    if (r.verdict == Verdict::fail) {
      ++report.failures;
      if (report.failing.size() < options.keep_failures) report.failing.push_back(r);
    }
  }
  if (evaluated == 0) {
    report.worst_residual = 0.0;
    report.worst_excess = 0.0;
  } else {
    report.mean_residual = residual_sum.value() / static_cast<double>(evaluated);
  }
  return report;
}

}  // namespace kyfan
