#include "kyfan/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace kyfan {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

CovarianceModel CovarianceModel::orthonormal() {
  return CovarianceModel{CovarianceFamily::orthonormal, 0.0, {}, 0};
}

CovarianceModel CovarianceModel::constant() {
  return CovarianceModel{CovarianceFamily::constant, 0.0, {}, 0};
}

CovarianceModel CovarianceModel::ar1(double rho) {
  CovarianceModel m{CovarianceFamily::ar1, rho, {}, 0};
  check_well_formed(m);
  return m;
}

CovarianceModel CovarianceModel::cosine(double theta0) {
  CovarianceModel m{CovarianceFamily::cosine, theta0, {}, 0};
  check_well_formed(m);
  return m;
}

CovarianceModel CovarianceModel::from_table(std::vector<cplx> values, std::int64_t horizon) {
  CovarianceModel m{CovarianceFamily::table, 0.0, std::move(values), horizon};
  check_well_formed(m);
  return m;
}

CovarianceModel CovarianceModel::from_real_table(const std::vector<double>& values,
                                                 std::int64_t horizon) {
  return from_table(std::vector<cplx>(values.begin(), values.end()), horizon);
}

cplx CovarianceModel::gamma(std::int64_t h) const {
  if (h < 0) return std::conj(gamma(-h));
  switch (family) {
    case CovarianceFamily::orthonormal:
      return h == 0 ? 1.0 : 0.0;
    case CovarianceFamily::constant:
      return 1.0;
    case CovarianceFamily::ar1:
      return std::pow(parameter, static_cast<double>(h));
    case CovarianceFamily::cosine:
      return unit_phase(static_cast<double>(h), parameter).real();
    case CovarianceFamily::table:
      if (h > horizon) throw HorizonError(h, horizon);
      return static_cast<std::size_t>(h) < table.size() ? table[static_cast<std::size_t>(h)]
                                                         : cplx{};
  }
  return {};
}

SpectralAtomsModel SpectralAtomsModel::from_atoms(std::vector<SpectralAtom> atoms) {
  for (auto& a : atoms) a.theta = normalize_angle(a.theta);
  SpectralAtomsModel m{std::move(atoms)};
  check_well_formed(m);
  return m;
}

double SpectralAtomsModel::total_mass() const {
  double mass = 0.0;
  for (const auto& a : atoms) mass += a.weight;
  return mass;
}

OperatorOrbitModel OperatorOrbitModel::make(Eigen::MatrixXcd T, Eigen::VectorXcd x0,
                                            OrbitClass cls) {
  OperatorOrbitModel m{std::move(T), std::move(x0), cls};
  check_well_formed(m);
  return m;
}

bool is_stationary(const StationaryModel& model) {
  if (const auto* orbit = std::get_if<OperatorOrbitModel>(&model)) {
    return orbit->declared_class == OrbitClass::unitary;
  }
  return true;
}

const char* to_string(CovarianceFamily family) {
  switch (family) {
    case CovarianceFamily::table: return "table";
    case CovarianceFamily::orthonormal: return "orthonormal";
    case CovarianceFamily::constant: return "constant";
    case CovarianceFamily::ar1: return "ar1";
    case CovarianceFamily::cosine: return "cosine";
  }
  return "?";
}

const char* to_string(OrbitClass cls) {
  return cls == OrbitClass::unitary ? "unitary" : "contraction";
}

std::string describe(const StationaryModel& model) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const CovarianceModel& m) {
                   os << "covariance:" << to_string(m.family);
                   if (m.family == CovarianceFamily::ar1) os << "(rho=" << m.parameter << ")";
                   if (m.family == CovarianceFamily::cosine) os << "(theta=" << m.parameter << ")";
                   if (m.family == CovarianceFamily::table) os << "(horizon=" << m.horizon << ")";
                 },
                 [&](const SpectralAtomsModel& m) { os << "spectral:" << m.atoms.size() << " atoms"; },
                 [&](const OperatorOrbitModel& m) {
                   os << "orbit:" << to_string(m.declared_class) << " d=" << m.T.rows();
                 },
             },
             model);
  return os.str();
}

double normalize_angle(double theta) {
  double r = std::remainder(theta, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

cplx unit_phase(double k, double theta) {
  const double p = k * theta;
  const double e = std::fma(k, theta, -p);
  const double c = std::cos(p);
  const double s = std::sin(p);
  return {c - s * e, s + c * e};
}

void check_well_formed(const StationaryModel& model) {
  std::visit(
      overloaded{
          [](const CovarianceModel& m) {
            switch (m.family) {
              case CovarianceFamily::ar1:
                if (!std::isfinite(m.parameter) || std::abs(m.parameter) >= 1.0) {
                  throw ModelError("/rho", "ar1 requires |rho| < 1");
                }
                break;
              case CovarianceFamily::cosine:
                if (!std::isfinite(m.parameter)) throw ModelError("/theta", "must be finite");
                break;
              case CovarianceFamily::table: {
                if (m.table.empty()) throw ModelError("/table", "must contain lag 0");
                if (m.horizon < 0) throw ModelError("/horizon", "must be >= 0");
                if (static_cast<std::int64_t>(m.table.size()) - 1 > m.horizon) {
                  throw ModelError("/table", "lag beyond horizon");
                }
                for (std::size_t h = 0; h < m.table.size(); ++h) {
                  if (!finite(m.table[h])) {
                    throw ModelError("/table/" + std::to_string(h), "must be finite");
                  }
                }
                if (m.table[0].real() < 0.0) throw ModelError("/table/0", "gamma(0) must be >= 0");
                break;
              }
              default:
                break;
            }
          },
          [](const SpectralAtomsModel& m) {
            for (std::size_t j = 0; j < m.atoms.size(); ++j) {
              const auto& a = m.atoms[j];
              const std::string at = "/atoms/" + std::to_string(j);
              if (!std::isfinite(a.theta)) throw ModelError(at + "/theta", "must be finite");
              if (!std::isfinite(a.weight) || a.weight <= 0.0) {
                throw ModelError(at + "/weight", "must be a positive finite real");
              }
              for (std::size_t i = 0; i < j; ++i) {
                if (normalize_angle(m.atoms[i].theta) == normalize_angle(a.theta)) {
                  throw ModelError(at + "/theta", "duplicates atom " + std::to_string(i));
                }
              }
            }
          },
          [](const OperatorOrbitModel& m) {
            if (m.T.rows() == 0 || m.T.rows() != m.T.cols()) {
              throw ModelError("/T", "must be a non-empty square matrix");
            }
            if (m.x0.size() != m.T.rows()) throw ModelError("/x0", "dimension must match T");
            if (!m.T.allFinite()) throw ModelError("/T", "entries must be finite");
            if (!m.x0.allFinite()) throw ModelError("/x0", "entries must be finite");
          },
      },
      model);
}

Eigen::MatrixXcd toeplitz_gram(const StationaryModel& model, std::int64_t n) {
  std::vector<cplx> lags(static_cast<std::size_t>(n));
  for (std::int64_t h = 0; h < n; ++h) lags[static_cast<std::size_t>(h)] = covariance_of(model, h);
  Eigen::MatrixXcd G(n, n);
  for (std::int64_t j = 0; j < n; ++j) {
    for (std::int64_t k = 0; k < n; ++k) {
      const auto d = j - k;
      G(j, k) = d >= 0 ? lags[static_cast<std::size_t>(d)] : std::conj(lags[static_cast<std::size_t>(-d)]);
    }
  }
  return G;
}

namespace {

double min_eigenvalue(const StationaryModel& model, std::int64_t n) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(toeplitz_gram(model, n),
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void add_psd_checks(const StationaryModel& model, std::int64_t window, ValidationReport& report) {
  const double g0 = covariance_of(model, 0).real();
  auto threshold = [&](std::int64_t n) { return -kPsdRelativeSlack * static_cast<double>(n) * g0; };
  // Leading principal minors interlace, so the window-W minimum bounds every smaller window.
  report.psd_window = window;
  report.min_eigenvalue = min_eigenvalue(model, window);
  const bool holds = report.min_eigenvalue >= threshold(window);
  if (!holds) {
    for (std::int64_t n = 1; n <= window; ++n) {
      if (min_eigenvalue(model, n) < threshold(n)) {
        report.first_failing_window = n;
        break;
      }
    }
  }
  InvariantCheck c{"toeplitz_psd", holds, report.min_eigenvalue, threshold(window), ""};
  if (!holds) c.detail = "negative eigenvalue first at window " + std::to_string(report.first_failing_window);
  report.checks.push_back(std::move(c));
}

}  // namespace

ValidationReport validate(const StationaryModel& model, std::int64_t psd_window) {
  if (psd_window < 1) throw ModelError("/psd_window", "must be >= 1");
  check_well_formed(model);
  ValidationReport report;

  std::visit(
      overloaded{
          [&](const CovarianceModel& m) {
            const cplx g0 = m.gamma(0);
            const double im = std::abs(g0.imag());
            report.checks.push_back({"hermitian_gamma0_real", im <= 1e-12, im, 1e-12, ""});
            std::int64_t window = psd_window;
            if (m.bounded_horizon()) window = std::min(window, m.horizon + 1);
            add_psd_checks(model, window, report);
          },
          [&](const SpectralAtomsModel& m) {
            const double mass = m.total_mass();
            report.checks.push_back({"finite_total_mass", std::isfinite(mass), mass, 0.0, ""});
            if (!m.atoms.empty()) add_psd_checks(model, psd_window, report);
          },
          [&](const OperatorOrbitModel& m) {
            const auto d = m.T.rows();
            if (m.declared_class == OrbitClass::unitary) {
              const Eigen::MatrixXcd defect =
                  m.T.adjoint() * m.T - Eigen::MatrixXcd::Identity(d, d);
              const double dev = defect.cwiseAbs().maxCoeff();
              report.checks.push_back({"unitary", dev <= kUnitaryTolerance, dev, kUnitaryTolerance, ""});
              if (dev <= kUnitaryTolerance && m.x0.squaredNorm() > 0.0) {
                add_psd_checks(model, psd_window, report);
              }
            } else {
              Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.T);
              const double norm = svd.singularValues()(0);
              report.checks.push_back(
                  {"contraction", norm <= 1.0 + kUnitaryTolerance, norm, 1.0 + kUnitaryTolerance, ""});
            }
          },
      },
      model);

  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const InvariantCheck& c) { return c.holds; });
  return report;
}

cplx covariance_of(const StationaryModel& model, std::int64_t h) {
  return std::visit(
      overloaded{
          [&](const CovarianceModel& m) { return m.gamma(h); },
          [&](const SpectralAtomsModel& m) {
            cplx sum{};
            for (const auto& a : m.atoms) sum += a.weight * unit_phase(static_cast<double>(h), a.theta);
            return sum;
          },
          [&](const OperatorOrbitModel& m) -> cplx {
            if (m.declared_class != OrbitClass::unitary) {
              throw NotStationaryError("not stationary: covariance undefined");
            }
            const std::int64_t lag = std::abs(h);
            const Eigen::VectorXcd first = m.T * m.x0;
            Eigen::VectorXcd v = first;
            for (std::int64_t k = 0; k < lag; ++k) v = m.T * v;
            const cplx g = first.dot(v);  // <T^{1+lag} x0, T x0>
            return h >= 0 ? g : std::conj(g);
          },
      },
      model);
}

CovarianceModel to_covariance(const StationaryModel& model, std::int64_t horizon) {
  if (horizon < 1) throw ModelError("/horizon", "must be >= 1");
  if (!is_stationary(model)) throw NotStationaryError("not stationary: covariance undefined");
  if (const auto* cov = std::get_if<CovarianceModel>(&model)) {
    if (!cov->bounded_horizon()) {
      std::vector<cplx> table(static_cast<std::size_t>(horizon) + 1);
      for (std::int64_t h = 0; h <= horizon; ++h) table[static_cast<std::size_t>(h)] = cov->gamma(h);
      return CovarianceModel::from_table(std::move(table), horizon);
    }
    if (horizon > cov->horizon) throw HorizonError(horizon, cov->horizon);
    return *cov;
  }

  std::vector<cplx> table(static_cast<std::size_t>(horizon) + 1);
  if (const auto* orbit = std::get_if<OperatorOrbitModel>(&model)) {
    const Eigen::VectorXcd first = orbit->T * orbit->x0;
    Eigen::VectorXcd v = first;
    for (std::int64_t h = 0; h <= horizon; ++h) {
      table[static_cast<std::size_t>(h)] = first.dot(v);
      v = orbit->T * v;
    }
  } else {
    for (std::int64_t h = 0; h <= horizon; ++h) table[static_cast<std::size_t>(h)] = covariance_of(model, h);
  }
  table[0] = table[0].real();
  return CovarianceModel::from_table(std::move(table), horizon);
}

}  // namespace kyfan
