#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace kyfan {

using cplx = std::complex<double>;

/// Structured rejection of a malformed model. `field()` names the offending
/// field as a JSON-pointer-like path (e.g. "/atoms/2/weight").
class ModelError : public std::invalid_argument {
 public:
  ModelError(std::string field, const std::string& message)
      : std::invalid_argument(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A table model was asked for a lag beyond its horizon.
class HorizonError : public std::out_of_range {
 public:
  HorizonError(std::int64_t lag, std::int64_t horizon)
      : std::out_of_range("horizon exceeded: lag " + std::to_string(lag) + " > horizon " +
                          std::to_string(horizon)) {}
};

/// An operation needs a weakly stationary model and got a contraction orbit.
class NotStationaryError : public std::logic_error {
 public:
  explicit NotStationaryError(const std::string& what) : std::logic_error(what) {}
};

enum class CovarianceFamily { table, orthonormal, constant, ar1, cosine };

/// gamma(h) = <X_{k+h}, X_k>; Hermitian, gamma(-h) = conj(gamma(h)).
struct CovarianceModel {
  CovarianceFamily family = CovarianceFamily::orthonormal;
  double parameter = 0.0;  // rho (ar1) or theta0 (cosine)
  std::vector<cplx> table; // lags 0..table.size()-1, zero from there up to horizon
  std::int64_t horizon = 0;

  static CovarianceModel orthonormal();
  static CovarianceModel constant();
  static CovarianceModel ar1(double rho);
  static CovarianceModel cosine(double theta0);
  static CovarianceModel from_table(std::vector<cplx> values, std::int64_t horizon);
  static CovarianceModel from_real_table(const std::vector<double>& values, std::int64_t horizon);

  [[nodiscard]] bool bounded_horizon() const { return family == CovarianceFamily::table; }

  /// Throws HorizonError for table models when |h| > horizon.
  [[nodiscard]] cplx gamma(std::int64_t h) const;
};

struct SpectralAtom {
  double theta = 0.0;  // in (-pi, pi]
  double weight = 0.0;
};

/// Atomic spectral measure: gamma(h) = sum_j w_j e^{i h theta_j}.
struct SpectralAtomsModel {
  std::vector<SpectralAtom> atoms;

  /// Normalizes angles and rejects non-positive weights or duplicate angles.
  static SpectralAtomsModel from_atoms(std::vector<SpectralAtom> atoms);

  [[nodiscard]] double total_mass() const;
};

enum class OrbitClass { unitary, contraction };

/// X_i = T^i x0.
struct OperatorOrbitModel {
  Eigen::MatrixXcd T;
  Eigen::VectorXcd x0;
  OrbitClass declared_class = OrbitClass::unitary;

  static OperatorOrbitModel make(Eigen::MatrixXcd T, Eigen::VectorXcd x0, OrbitClass cls);
};

using StationaryModel = std::variant<CovarianceModel, SpectralAtomsModel, OperatorOrbitModel>;

[[nodiscard]] bool is_stationary(const StationaryModel& model);
[[nodiscard]] std::string describe(const StationaryModel& model);
[[nodiscard]] const char* to_string(CovarianceFamily family);
[[nodiscard]] const char* to_string(OrbitClass cls);

/// Maps any angle to (-pi, pi].
[[nodiscard]] double normalize_angle(double theta);

/// e^{i k theta} with the rounding error of k*theta folded back in.
[[nodiscard]] cplx unit_phase(double k, double theta);

/// Throws ModelError when a structural field is malformed.
void check_well_formed(const StationaryModel& model);

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kPsdRelativeSlack = 1e-10;

struct InvariantCheck {
  std::string name;
  bool holds = true;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ValidationReport {
  bool pass = true;
  std::int64_t psd_window = 0;  // effective window (clamped to horizon+1 for tables)
  double min_eigenvalue = 0.0;
  std::int64_t first_failing_window = 0;  // 0 when PSD holds
  std::vector<InvariantCheck> checks;
};

/// Checks the standing hypotheses of each representation. Malformed models
/// throw ModelError; hypotheses that fail numerically are reported.
[[nodiscard]] ValidationReport validate(const StationaryModel& model, std::int64_t psd_window);

/// gamma(h). Contraction orbits throw NotStationaryError.
[[nodiscard]] cplx covariance_of(const StationaryModel& model, std::int64_t h);

/// Tabulates gamma(0..horizon) for spectral models and unitary orbits.
[[nodiscard]] CovarianceModel to_covariance(const StationaryModel& model, std::int64_t horizon);

/// Hermitian Toeplitz matrix [gamma(j - k)]_{j,k < n}.
[[nodiscard]] Eigen::MatrixXcd toeplitz_gram(const StationaryModel& model, std::int64_t n);

}  // namespace kyfan
