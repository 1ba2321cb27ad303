#include "kyfan/json_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

namespace kyfan {

namespace {

void allow_only(const Json& obj, const std::string& at, std::initializer_list<const char*> keys) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ModelError(at + "/" + key, "unknown field");
  }
}

const Json& require(const Json& obj, const std::string& at, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ModelError(at + "/" + key, "required field missing");
  return *it;
}

double number(const Json& v, const std::string& at) {
  if (!v.is_number()) throw ModelError(at, "expected a number");
  return v.get<double>();
}

std::int64_t integer(const Json& v, const std::string& at) {
  if (!v.is_number_integer()) throw ModelError(at, "expected an integer");
  return v.get<std::int64_t>();
}

cplx complex_value(const Json& v, const std::string& at) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2) return {number(v[0], at + "/0"), number(v[1], at + "/1")};
  throw ModelError(at, "expected a number or a [re, im] pair");
}

Json complex_to_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return Json::array({z.real(), z.imag()});
}

CovarianceModel covariance_from_json(const Json& doc) {
  if (doc.contains("table")) {
    allow_only(doc, "", {"type", "table", "horizon"});
    const auto& table = doc["table"];
    if (!table.is_object()) throw ModelError("/table", "expected an object keyed by lag");
    const std::int64_t horizon = integer(require(doc, "", "horizon"), "/horizon");
    std::vector<cplx> values;
    for (const auto& [key, value] : table.items()) {
      const std::string at = "/table/" + key;
      std::size_t used = 0;
      long long lag = -1;
      try {
        lag = std::stoll(key, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != key.size() || lag < 0) throw ModelError(at, "lag keys must be nonnegative integers");
      if (lag > horizon) throw ModelError(at, "lag beyond horizon");
      if (values.size() <= static_cast<std::size_t>(lag)) values.resize(static_cast<std::size_t>(lag) + 1);
      values[static_cast<std::size_t>(lag)] = complex_value(value, at);
    }
    if (!table.contains("0")) throw ModelError("/table/0", "required field missing");
    return CovarianceModel::from_table(std::move(values), horizon);
  }

  const auto& family_field = require(doc, "", "family");
  if (!family_field.is_string()) throw ModelError("/family", "expected a string");
  const auto family = family_field.get<std::string>();
  if (family == "orthonormal") {
    allow_only(doc, "", {"type", "family"});
    return CovarianceModel::orthonormal();
  }
  if (family == "constant") {
    allow_only(doc, "", {"type", "family"});
    return CovarianceModel::constant();
  }
  if (family == "ar1") {
    allow_only(doc, "", {"type", "family", "rho"});
    return CovarianceModel::ar1(number(require(doc, "", "rho"), "/rho"));
  }
  if (family == "cosine") {
    allow_only(doc, "", {"type", "family", "theta"});
    return CovarianceModel::cosine(number(require(doc, "", "theta"), "/theta"));
  }
  throw ModelError("/family", "unknown family '" + family + "'");
}

SpectralAtomsModel spectral_from_json(const Json& doc) {
  allow_only(doc, "", {"type", "atoms"});
  const auto& atoms = require(doc, "", "atoms");
  if (!atoms.is_array()) throw ModelError("/atoms", "expected an array");
  std::vector<SpectralAtom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string at = "/atoms/" + std::to_string(i);
    if (!atoms[i].is_object()) throw ModelError(at, "expected an object");
    allow_only(atoms[i], at, {"theta", "weight"});
    out.push_back({number(require(atoms[i], at, "theta"), at + "/theta"),
                   number(require(atoms[i], at, "weight"), at + "/weight")});
  }
  return SpectralAtomsModel::from_atoms(std::move(out));
}

OperatorOrbitModel orbit_from_json(const Json& doc) {
  allow_only(doc, "", {"type", "T", "x0", "class"});
  const auto& rows = require(doc, "", "T");
  if (!rows.is_array() || rows.empty()) throw ModelError("/T", "must be a non-empty square matrix");
  const auto d = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXcd T(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const std::string at = "/T/" + std::to_string(i);
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
      throw ModelError(at, "must be a non-empty square matrix");
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      T(i, j) = complex_value(row[static_cast<std::size_t>(j)], at + "/" + std::to_string(j));
    }
  }
  const auto& xs = require(doc, "", "x0");
  if (!xs.is_array()) throw ModelError("/x0", "expected an array");
  Eigen::VectorXcd x0(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    x0(static_cast<Eigen::Index>(i)) = complex_value(xs[i], "/x0/" + std::to_string(i));
  }
  OrbitClass cls = OrbitClass::unitary;
  if (doc.contains("class")) {
    const auto& c = doc["class"];
    if (c == "unitary") {
      cls = OrbitClass::unitary;
    } else if (c == "contraction") {
      cls = OrbitClass::contraction;
    } else {
      throw ModelError("/class", "expected \"unitary\" or \"contraction\"");
    }
  }
  return OperatorOrbitModel::make(std::move(T), std::move(x0), cls);
}

Json vector_to_json(const Eigen::VectorXcd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

}  // namespace

StationaryModel model_from_json(const Json& doc) {
  if (!doc.is_object()) throw ModelError("", "model spec must be a JSON object");
  const auto& type = require(doc, "", "type");
  if (type == "covariance") return covariance_from_json(doc);
  if (type == "spectral") return spectral_from_json(doc);
  if (type == "orbit") return orbit_from_json(doc);
  throw ModelError("/type", "expected \"covariance\", \"spectral\" or \"orbit\"");
}

StationaryModel load_model(std::string_view path_or_inline) {
  std::string text;
  if (!path_or_inline.empty() && path_or_inline.front() == '{') {
    text = path_or_inline;
  } else {
    std::ifstream in{std::string(path_or_inline)};
    if (!in) throw ModelError("", "cannot read model file '" + std::string(path_or_inline) + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ModelError("", std::string("invalid JSON: ") + e.what());
  }
  return model_from_json(doc);
}

Json model_to_json(const StationaryModel& model) {
  if (const auto* cov = std::get_if<CovarianceModel>(&model)) {
    Json out{{"type", "covariance"}};
    switch (cov->family) {
      case CovarianceFamily::table: {
        Json table = Json::object();
        for (std::size_t h = 0; h < cov->table.size(); ++h) {
          if (h == 0 || cov->table[h] != cplx{}) table[std::to_string(h)] = complex_to_json(cov->table[h]);
        }
        out["table"] = table;
        out["horizon"] = cov->horizon;
        break;
      }
      case CovarianceFamily::ar1:
        out["family"] = "ar1";
        out["rho"] = cov->parameter;
        break;
      case CovarianceFamily::cosine:
        out["family"] = "cosine";
        out["theta"] = cov->parameter;
        break;
      default:
        out["family"] = to_string(cov->family);
    }
    return out;
  }
  if (const auto* spec = std::get_if<SpectralAtomsModel>(&model)) {
    Json atoms = Json::array();
    for (const auto& a : spec->atoms) atoms.push_back({{"theta", a.theta}, {"weight", a.weight}});
    return {{"type", "spectral"}, {"atoms", atoms}};
  }
  const auto& orbit = std::get<OperatorOrbitModel>(model);
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < orbit.T.rows(); ++i) rows.push_back(vector_to_json(orbit.T.row(i).transpose()));
  return {{"type", "orbit"}, {"T", rows}, {"x0", vector_to_json(orbit.x0)}, {"class", to_string(orbit.declared_class)}};
}

Json to_json(const CheckReport& r) {
  return {{"check", r.check},         {"model", r.model},     {"inputs", r.inputs},
          {"lhs", r.lhs},             {"rhs", r.rhs},         {"residual", r.residual},
          {"tolerance", r.tolerance}, {"verdict", to_string(r.verdict)}, {"note", r.note}};
}

Json to_json(const ScanReport& r) {
  Json failing = Json::array();
  for (const auto& f : r.failing) failing.push_back(to_json(f));
  return {{"check", r.check},
          {"model", r.model},
          {"cells", r.cells},
          {"failures", r.failures},
          {"precondition_violations", r.precondition_violations},
          {"errors", r.errors},
          {"worst_residual", r.worst_residual},
          {"worst_excess", r.worst_excess},
          {"worst_n", r.worst_n},
          {"worst_m", r.worst_m},
          {"mean_residual", r.mean_residual},
          {"failing", failing},
          {"error_messages", r.error_messages}};
}

Json to_json(const ValidationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"holds", c.holds},
                      {"measured", c.measured},
                      {"threshold", c.threshold},
                      {"detail", c.detail}});
  }
  return {{"pass", r.pass},
          {"psd_window", r.psd_window},
          {"min_eigenvalue", r.min_eigenvalue},
          {"first_failing_window", r.first_failing_window},
          {"checks", checks}};
}

Json to_json(const FeketeTrace& r) {
  return {{"horizon", r.horizon},   {"values", r.values},           {"running_inf", r.running_inf},
          {"argmin", r.argmin},     {"estimate", r.estimate()},     {"gap", r.gap},
          {"spot_checks", r.spot_checks}, {"warnings", r.warnings}};
}

Json to_json(const CesaroReport& r) {
  Json trend = Json::array();
  for (const auto& p : r.trend) {
    trend.push_back({{"N", p.N}, {"lim_estimate", p.lim_estimate}, {"inf_estimate", p.inf_estimate},
                     {"agreement", p.agreement}});
  }
  return {{"N", r.N},
          {"lim_estimate", r.lim_estimate},
          {"inf_estimate", r.inf_estimate},
          {"inf_argmin", r.inf_argmin},
          {"agreement", r.agreement},
          {"trend", trend},
          {"trend_nonincreasing", r.trend_nonincreasing},
          {"stationary", r.stationary}};
}

Json to_json(const ProjectionReport& r) {
  return {{"chi", vector_to_json(r.chi)},
          {"chi_norm", r.chi_norm},
          {"fixed_dim", r.fixed_dim},
          {"schedule", r.schedule},
          {"residuals", r.residuals},
          {"riesz_angle", r.riesz_angle},
          {"eigen_gap", std::isfinite(r.eigen_gap) ? Json(r.eigen_gap) : Json(nullptr)},
          {"rate_constant", r.rate_constant},
          {"rate_bound_holds", r.rate_bound_holds}};
}

Json to_json(const DensityReport& r) {
  return {{"N", r.N},
          {"epsilon", r.epsilon},
          {"cesaro_mean", r.cesaro_mean},
          {"density_of_small_set", r.density_of_small_set},
          {"max_abs", r.max_abs},
          {"max_abs_first_half", r.max_abs_first_half},
          {"bounded_reliable", r.bounded_reliable},
          {"dlim_verdict", r.consistent_with_zero ? "consistent-with-zero" : "inconsistent"}};
}

Json to_json(const RatioReport& r) {
  return {{"sequence", r.sequence},
          {"N", r.N},
          {"normalization", to_string(r.normalization)},
          {"ratios", r.ratios},
          {"raw_sum", r.raw_sum},
          {"normalized_sum", r.normalized_sum},
          {"telescoped_sum", r.telescoped_sum},
          {"telescoping_residual", r.telescoping_residual},
          {"decomposition_residual", r.decomposition_residual},
          {"tolerance", r.tolerance},
          {"comparator", r.comparator},
          {"identity_holds", r.identity_holds}};
}

Json to_json(const ArithmeticReport& r) {
  return {{"check", to_json(r.check)},
          {"c_statistic", r.c_statistic},
          {"c_statistic_weighted", r.c_statistic_weighted},
          {"weighted_residual", r.weighted_residual},
          {"literal_matches_lhs", r.literal_matches_lhs}};
}

Json to_json(const ChainReport& r) {
  return {{"D", r.D},
          {"terms", r.terms},
          {"partial_sums", r.partial_sums},
          {"telescoped", r.telescoped},
          {"residuals", r.residuals},
          {"tolerance", r.tolerance},
          {"total", r.total},
          {"tail_estimate", r.tail_estimate},
          {"residuals_ok", r.residuals_ok},
          {"partial_sums_nondecreasing", r.partial_sums_nondecreasing}};
}

Json to_json(const TrendReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points) points.push_back({{"N", p.N}, {"value", p.value}});
  return {{"points", points}, {"nonincreasing", r.nonincreasing}};
}

Json to_json(const FractionalTransform& r) {
  return {{"alpha", r.alpha}, {"source", model_to_json(r.source)}, {"transformed", model_to_json(r.transformed)}};
}

Json to_json(const DecayTrace& r) {
  Json points = Json::array();
  for (const auto& p : r.points) points.push_back({{"n", p.n}, {"value", p.value}, {"envelope", p.envelope}});
  return {{"alpha", r.alpha},
          {"epsilon", r.epsilon},
          {"points", points},
          {"envelope_nonincreasing", r.envelope_nonincreasing},
          {"final_envelope", r.final_envelope},
          {"vanishing", r.vanishing}};
}

Json to_json(const SeriesReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points) {
    points.push_back({{"N", p.N}, {"partial_sum", p.partial_sum}, {"increment", p.increment}});
  }
  return {{"points", points}, {"verdict", to_string(r.verdict)}, {"last_increment", r.last_increment}};
}

Json to_json(const SubadditivityReport& r) {
  return {{"n_max", r.n_max},         {"pairs", r.pairs},     {"failures", r.failures},
          {"equality_cases", r.equality_cases}, {"worst_slack", r.worst_slack},
          {"worst_n", r.worst_n},     {"worst_m", r.worst_m}};
}

Json to_json(const IRatioReport& r) {
  return {{"x", r.x},
          {"y", r.y},
          {"I", r.I},
          {"stated_bound", r.stated_bound},
          {"sharp_bound", r.sharp_bound},
          {"p", r.p},
          {"q", r.q},
          {"r", r.r},
          {"condition_met", r.condition_met},
          {"stated_bound_holds", r.stated_bound_holds},
          {"sharp_bound_holds", r.sharp_bound_holds},
          {"subadditivity_holds", r.subadditivity_holds},
          {"tolerance", r.tolerance}};
}

Json to_json(const IRatioScan& r) {
  auto finite = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return {{"pairs", r.pairs},
          {"condition_pairs", r.condition_pairs},
          {"stated_violations", r.stated_violations},
          {"sharp_violations", r.sharp_violations},
          {"subadditivity_violations", r.subadditivity_violations},
          {"worst_stated_excess", finite(r.worst_stated_excess)},
          {"worst_sharp_excess", finite(r.worst_sharp_excess)}};
}

}  // namespace kyfan
