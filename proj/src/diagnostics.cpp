#include "kyfan/diagnostics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "kyfan/asymptotics.hpp"
#include "kyfan/summation.hpp"

namespace kyfan {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::out_of_range("index overflows 64 bits");
  return out;
}

std::int64_t parse_int(std::string_view text, const char* what) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument(std::string("bad integer for ") + what + ": '" + std::string(text) + "'");
  }
  return v;
}

void require_increasing(const std::vector<std::int64_t>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 1) throw std::invalid_argument("sequence entries must be positive");
    if (i > 0 && values[i] <= values[i - 1]) {
      throw std::invalid_argument("sequence must be strictly increasing at position " + std::to_string(i + 1));
    }
  }
}

}  // namespace

IndexSequence IndexSequence::explicit_list(std::vector<std::int64_t> values) {
  require_increasing(values);
  IndexSequence s;
  s.kind_ = Kind::explicit_list;
  s.values_ = std::move(values);
  return s;
}

IndexSequence IndexSequence::arithmetic(std::int64_t step) {
  if (step < 1) throw std::invalid_argument("arithmetic step must be >= 1");
  IndexSequence s;
  s.kind_ = Kind::arithmetic;
  s.parameter_ = step;
  return s;
}

IndexSequence IndexSequence::geometric(std::int64_t base) {
  if (base < 2) throw std::invalid_argument("geometric base must be >= 2");
  IndexSequence s;
  s.kind_ = Kind::geometric;
  s.parameter_ = base;
  return s;
}

IndexSequence IndexSequence::squares() {
  IndexSequence s;
  s.kind_ = Kind::squares;
  return s;
}

IndexSequence IndexSequence::custom(std::function<std::int64_t(std::int64_t)> generator,
                                    std::string gap_law) {
  IndexSequence s;
  s.kind_ = Kind::custom;
  s.generator_ = std::move(generator);
  s.gap_law_ = std::move(gap_law);
  return s;
}

IndexSequence IndexSequence::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view tail = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (head == "squares" && tail.empty()) return squares();
  if (head == "arithmetic") return arithmetic(parse_int(tail, "arithmetic step"));
  if (head == "geometric") return geometric(parse_int(tail, "geometric base"));
  if (head == "list") {
    std::vector<std::int64_t> values;
    std::size_t start = 0;
    while (start <= tail.size()) {
      const auto comma = tail.find(',', start);
      const auto piece = tail.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      values.push_back(parse_int(piece, "list entry"));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return explicit_list(std::move(values));
  }
  if (head == "file") {
    std::ifstream in{std::string(tail)};
    if (!in) throw std::invalid_argument("cannot open sequence file '" + std::string(tail) + "'");
    std::vector<std::int64_t> values;
    std::string token;
    while (in >> token) values.push_back(parse_int(token, "file entry"));
    return explicit_list(std::move(values));
  }
  throw std::invalid_argument("unknown sequence spec '" + std::string(spec) + "'");
}

std::int64_t IndexSequence::at(std::int64_t k) const {
  if (k < 1) throw std::out_of_range("sequence index must be >= 1");
  switch (kind_) {
    case Kind::explicit_list:
      if (k > static_cast<std::int64_t>(values_.size())) {
        throw std::out_of_range("sequence has only " + std::to_string(values_.size()) + " terms");
      }
      return values_[static_cast<std::size_t>(k - 1)];
    case Kind::arithmetic: return checked_mul(parameter_, k);
    case Kind::geometric: {
      std::int64_t v = 1;
      for (std::int64_t i = 0; i < k; ++i) v = checked_mul(v, parameter_);
      return v;
    }
    case Kind::squares: return checked_mul(k, k);
    case Kind::custom: {
      const auto v = generator_(k);
      if (v < 1 || (k > 1 && v <= generator_(k - 1))) {
        throw std::domain_error("custom sequence is not strictly increasing at k = " + std::to_string(k));
      }
      return v;
    }
  }
  return 0;
}

std::optional<std::int64_t> IndexSequence::size() const {
  if (kind_ == Kind::explicit_list) return static_cast<std::int64_t>(values_.size());
  return std::nullopt;
}

std::string IndexSequence::describe() const {
  switch (kind_) {
    case Kind::explicit_list: return "list(" + std::to_string(values_.size()) + ")";
    case Kind::arithmetic: return "arithmetic:" + std::to_string(parameter_);
    case Kind::geometric: return "geometric:" + std::to_string(parameter_);
    case Kind::squares: return "squares";
    case Kind::custom: return "custom(" + gap_law_ + ")";
  }
  return "?";
}

ChainSpec::ChainSpec(std::int64_t d1, std::vector<std::int64_t> ratios) : ratios_(std::move(ratios)) {
  if (d1 < 1) throw std::invalid_argument("D1 must be >= 1");
  values_.push_back(d1);
  for (std::size_t j = 0; j < ratios_.size(); ++j) {
    if (ratios_[j] < 2) throw std::invalid_argument("chain ratios must be >= 2");
    std::int64_t next = 0;
    if (__builtin_mul_overflow(values_.back(), ratios_[j], &next)) {
      throw std::out_of_range("chain depth overflows 64 bits at j = " + std::to_string(j + 2));
    }
    values_.push_back(next);
  }
}

ChainSpec ChainSpec::geometric(std::int64_t base, std::int64_t depth) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  return ChainSpec(base, std::vector<std::int64_t>(static_cast<std::size_t>(depth), base));
}

std::int64_t ChainSpec::D(std::int64_t j) const {
  if (j < 1 || j > static_cast<std::int64_t>(values_.size())) throw std::out_of_range("chain index out of range");
  return values_[static_cast<std::size_t>(j - 1)];
}

double ratio_statistic(GramEngine& engine, std::int64_t a, std::int64_t b) {
  if (a < 1 || b <= a) throw std::invalid_argument("ratio needs 1 <= n_k < n_{k+1}");
  const double da = static_cast<double>(a), db = static_cast<double>(b);
  return engine.normalized_diff_sq(a, b - a, da, db) * (da * db / (db - da));
}

RatioTerm ratio_with_decomposition(GramEngine& engine, std::int64_t a, std::int64_t b, const Tolerance& tol) {
  RatioTerm t;
  t.ratio = ratio_statistic(engine, a, b);
  const double da = static_cast<double>(a), db = static_cast<double>(b), dg = db - da;
  const double sa = engine.sum_norm_sq(a) / da;
  const double sb = engine.sum_norm_sq(b) / db;
  const double sg = engine.sum_norm_sq(b - a) / dg;
  t.decomposition = sa - sb + sg;
  t.residual = std::abs(t.ratio - t.decomposition);
  // The ratio divides an O(1) difference by 1/a - 1/b; rounding in the Gram
  // data is amplified by a b / (b - a).
  const double conditioning = da * db / dg;
  const double roundoff = 32.0 * kEps * conditioning * std::max(sa / da, sb / db);
  t.tolerance = tol.bound({t.ratio, sa, sb, sg}) + roundoff;
  return t;
}

const char* to_string(Normalization n) { return n == Normalization::by_nN ? "by_nN" : "by_count"; }

Normalization parse_normalization(std::string_view s) {
  if (s == "by_nN") return Normalization::by_nN;
  if (s == "by_count") return Normalization::by_count;
  throw std::invalid_argument("normalization must be by_nN or by_count");
}

RatioReport ratio_sum(GramEngine& engine, const IndexSequence& seq, std::int64_t N,
                      Normalization normalization, const Tolerance& tol) {
  if (N < 2) throw std::invalid_argument("ratio_sum needs N >= 2");
  if (auto size = seq.size(); size && *size < N) {
    throw std::invalid_argument("sequence has fewer than N = " + std::to_string(N) + " terms");
  }
  RatioReport r;
  r.sequence = seq.describe();
  r.N = N;
  r.normalization = normalization;
  r.ratios.reserve(static_cast<std::size_t>(N - 1));

  CompensatedSum raw, gaps;
  double tol_sum = 0.0;
  std::int64_t prev = seq.at(1);
  const std::int64_t first = prev;
  std::int64_t last = prev;
  std::vector<std::int64_t> gap_list;
  for (std::int64_t k = 1; k < N; ++k) {
    const std::int64_t next = seq.at(k + 1);
    if (next <= prev) throw std::domain_error("sequence not strictly increasing at k = " + std::to_string(k + 1));
    const auto term = ratio_with_decomposition(engine, prev, next, tol);
    r.ratios.push_back(term.ratio);
    raw.add(term.ratio);
    const auto d = next - prev;
    gaps.add(engine.sum_norm_sq(d) / static_cast<double>(d));
    gap_list.push_back(d);
    r.decomposition_residual = std::max(r.decomposition_residual, term.residual);
    tol_sum += term.tolerance;
    prev = next;
    last = next;
  }

  const double s_first = engine.sum_norm_sq(first) / static_cast<double>(first);
  const double s_last = engine.sum_norm_sq(last) / static_cast<double>(last);
  r.raw_sum = raw.value();
  r.telescoped_sum = s_first - s_last + gaps.value();
  r.telescoping_residual = std::abs(r.raw_sum - r.telescoped_sum);
  r.tolerance = tol.bound({r.raw_sum, r.telescoped_sum}) + tol_sum;
  r.identity_holds = r.telescoping_residual <= r.tolerance;

  const double denom = normalization == Normalization::by_nN ? static_cast<double>(last)
                                                             : static_cast<double>(N - 1);
  r.normalized_sum = r.raw_sum / denom;

  const double tail = s_last / static_cast<double>(last);
  for (auto d : gap_list) {
    const double dd = static_cast<double>(d);
    r.comparator = std::max(r.comparator, std::abs(engine.sum_norm_sq(d) / (dd * dd) - tail));
  }
  return r;
}

ArithmeticReport arithmetic_identity(GramEngine& engine, std::int64_t a, std::int64_t N, const Tolerance& tol) {
  if (!engine.stationary()) throw NotStationaryError("diag.arith requires a weakly stationary model");
  if (a < 1 || N < 1) throw std::invalid_argument("a and N must be >= 1");
  ArithmeticReport out;
  auto& c = out.check;
  c.check = "diag.arith";
  c.model = describe(engine.model());
  c.inputs["a"] = static_cast<double>(a);
  c.inputs["N"] = static_cast<double>(N);

  const double da = static_cast<double>(a), dN = static_cast<double>(N);
  CompensatedSum ratios, literal, weighted;
  double roundoff = 0.0;
  for (std::int64_t k = 1; k < N; ++k) {
    const auto term = ratio_with_decomposition(engine, a * k, a * (k + 1), tol);
    ratios.add(term.ratio);
    roundoff += term.tolerance - tol.abs;

    // ||k S_{a(k+1)} - (k+1) S_{ak}||^2 from Gram data.
    const double dk = static_cast<double>(k);
    const double s_lo = engine.sum_norm_sq(a * k);
    const double s_hi = engine.sum_norm_sq(a * (k + 1));
    const double cross = engine.cross_inner(a * k, a).real();
    const double sq = std::max(0.0, dk * dk * s_hi + (dk + 1) * (dk + 1) * s_lo - 2.0 * dk * (dk + 1) * cross);
    literal.add(sq);
    weighted.add(sq / (da * dk * (dk + 1)));
  }
  const double sa = engine.sum_norm_sq(a) / (da * da);
  const double aN = da * dN;
  c.lhs = ratios.value() / aN;
  c.rhs = sa - engine.sum_norm_sq(a * N) / (aN * aN);
  c.residual = std::abs(c.lhs - c.rhs);
  c.tolerance = tol.bound({c.lhs, c.rhs, sa}) + roundoff / aN;
  c.verdict = c.residual <= c.tolerance ? Verdict::identity_pass : Verdict::fail;

  out.c_statistic = literal.value() / aN;
  out.c_statistic_weighted = weighted.value() / aN;
  out.weighted_residual = std::abs(out.c_statistic_weighted - c.lhs);
  out.literal_matches_lhs = std::abs(out.c_statistic - c.lhs) <= c.tolerance;
  if (!out.literal_matches_lhs) {
    c.note = "literal (c) statistic differs from lhs; terms need the 1/(a k (k+1)) weight";
  }
  return out;
}

ChainReport chain_series(GramEngine& engine, const ChainSpec& chain, std::int64_t J, const Tolerance& tol) {
  if (!engine.stationary()) throw NotStationaryError("diag.chain requires a weakly stationary model");
  if (J < 1 || J > chain.depth()) {
    throw std::out_of_range("chain depth " + std::to_string(chain.depth()) + " < J = " + std::to_string(J));
  }
  ChainReport r;
  for (std::int64_t j = 1; j <= J + 1; ++j) r.D.push_back(chain.D(j));
  const double d1 = static_cast<double>(r.D[0]);
  const double head = engine.sum_norm_sq(r.D[0]) / (d1 * d1);

  CompensatedSum partial;
  double roundoff = 0.0;
  for (std::int64_t j = 1; j <= J; ++j) {
    const std::int64_t Dj = chain.D(j), Dnext = chain.D(j + 1);
    CompensatedSum level;
    for (std::int64_t k = 1; k < chain.ratio(j); ++k) {
      const auto term = ratio_with_decomposition(engine, k * Dj, (k + 1) * Dj, tol);
      level.add(term.ratio);
      roundoff += (term.tolerance - tol.abs) / static_cast<double>(Dnext);
    }
    const double t = level.value() / static_cast<double>(Dnext);
    partial.add(t);
    const double dn = static_cast<double>(Dnext);
    const double tele = head - engine.sum_norm_sq(Dnext) / (dn * dn);
    const double ps = partial.value();
    const double bound = tol.bound({ps, tele, head}) + roundoff;
    r.terms.push_back(t);
    r.partial_sums.push_back(ps);
    r.telescoped.push_back(tele);
    r.residuals.push_back(std::abs(ps - tele));
    r.tolerance = std::max(r.tolerance, bound);
    if (r.residuals.back() > bound) r.residuals_ok = false;
    if (t < -bound) r.partial_sums_nondecreasing = false;
  }
  r.total = r.partial_sums.back();

  const std::int64_t top = r.D.back();
  double inf = std::numeric_limits<double>::infinity();
  for (std::int64_t n = 1; n <= top; ++n) {
    const double dn = static_cast<double>(n);
    inf = std::min(inf, engine.sum_norm_sq(n) / (dn * dn));
  }
  const double dt = static_cast<double>(top);
  r.tail_estimate = engine.sum_norm_sq(top) / (dt * dt) - inf;
  return r;
}

StationaryModel recenter(const StationaryModel& model) {
  if (std::holds_alternative<CovarianceModel>(model)) {
    throw std::invalid_argument("re-centering needs spectral access; covariance models are rejected");
  }
  if (const auto* spectral = std::get_if<SpectralAtomsModel>(&model)) {
    SpectralAtomsModel out;
    for (const auto& atom : spectral->atoms) {
      if (atom.theta != 0.0) out.atoms.push_back(atom);
    }
    return out;
  }
  const auto& orbit = std::get<OperatorOrbitModel>(model);
  if (orbit.declared_class != OrbitClass::unitary) {
    throw NotStationaryError("re-centering needs a unitary orbit");
  }
  const auto projection = fixed_space_projection(orbit, 1);
  return OperatorOrbitModel::make(orbit.T, orbit.x0 - projection.chi, orbit.declared_class);
}

TrendReport gap_divergent_trend(const StationaryModel& model, const IndexSequence& seq, std::int64_t N_max,
                                const Tolerance& tol) {
  GramEngine engine(recenter(model));
  TrendReport out;
  for (std::int64_t N = 2; N <= N_max; N *= 2) {
    const auto r = ratio_sum(engine, seq, N, Normalization::by_nN, tol);
    if (!out.points.empty()) {
      const double prev = out.points.back().value;
      if (r.normalized_sum > prev + tol.bound({prev, r.normalized_sum})) out.nonincreasing = false;
    }
    out.points.push_back({N, r.normalized_sum});
  }
  return out;
}

}  // namespace kyfan
