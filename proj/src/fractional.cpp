#include "kyfan/fractional.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "kyfan/sums.hpp"
#include "kyfan/summation.hpp"

namespace kyfan {

StationaryModel fractional_power(const StationaryModel& model, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
  check_well_formed(model);
  if (std::holds_alternative<CovarianceModel>(model)) {
    throw std::invalid_argument("fractional transform needs spectral access; covariance models are rejected");
  }
  if (const auto* spectral = std::get_if<SpectralAtomsModel>(&model)) {
    SpectralAtomsModel out;
    for (const auto& atom : spectral->atoms) {
      const double modulus = 2.0 * std::abs(std::sin(atom.theta / 2.0));  // |1 - e^{i theta}|
      const double w = atom.weight * std::pow(modulus, 2.0 * alpha);
      if (w > 0.0) out.atoms.push_back({atom.theta, w});
    }
    return out;
  }

  const auto& orbit = std::get<OperatorOrbitModel>(model);
  const Eigen::MatrixXcd& T = orbit.T;
  const double defect = (T.adjoint() * T - T * T.adjoint()).cwiseAbs().maxCoeff();
  if (defect > kUnitaryTolerance * std::max(1.0, T.cwiseAbs2().sum())) {
    throw std::invalid_argument("fractional transform needs a normal T");
  }
  // A normal matrix has a diagonal Schur form with unitary Q.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(T);
  const Eigen::MatrixXcd& Q = schur.matrixU();
  const Eigen::MatrixXcd& U = schur.matrixT();
  const double threshold = 1e-8 * std::max(1.0, U.diagonal().cwiseAbs().maxCoeff());
  Eigen::VectorXcd coeffs = Q.adjoint() * orbit.x0;
  for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
    const cplx base = 1.0 - U(j, j);
    coeffs(j) *= std::abs(base) < threshold ? cplx{} : std::pow(base, alpha);
  }
  return OperatorOrbitModel::make(T, Q * coeffs, orbit.declared_class);
}

FractionalTransform apply_fractional(const StationaryModel& model, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  return FractionalTransform{alpha, model, fractional_power(model, alpha)};
}

DecayTrace decay_trace(const FractionalTransform& transform, std::int64_t N, double epsilon,
                       const Tolerance& tol) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  DecayTrace trace;
  trace.alpha = transform.alpha;
  trace.epsilon = epsilon;
  GramEngine engine(transform.transformed);
  const double power = 1.0 - transform.alpha;

  double block_max = 0.0;
  std::int64_t next = 1;
  for (std::int64_t n = 1; n <= N; ++n) {
    const double v = std::sqrt(engine.sum_norm_sq(n)) / std::pow(static_cast<double>(n), power);
    block_max = std::max(block_max, v);
    if (n == next || n == N) {
      trace.points.push_back({n, v, block_max});
      block_max = 0.0;
      if (n == next) next *= 2;
    }
  }
  for (std::size_t j = 3; j < trace.points.size(); ++j) {
    // Blocks {1} and {2} are single points; compare once blocks hold two or more.
    const double prev = trace.points[j - 1].envelope, cur = trace.points[j].envelope;
    if (cur > prev + tol.bound({prev, cur})) trace.envelope_nonincreasing = false;
  }
  trace.final_envelope = trace.points.back().envelope;
  trace.vanishing = trace.final_envelope <= epsilon && trace.envelope_nonincreasing;
  return trace;
}

const char* to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::converging: return "converging";
    case SeriesVerdict::diverging: return "diverging";
    case SeriesVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

SeriesReport membership_series(const StationaryModel& model, std::int64_t N_max) {
  if (N_max < 1) throw std::invalid_argument("N_max must be >= 1");
  if (!is_stationary(model)) throw NotStationaryError("membership series needs a stationary model");
  GramEngine engine(model);
  SeriesReport report;
  CompensatedSum partial;
  double previous = 0.0;
  std::int64_t next = 1;
  for (std::int64_t n = 1; n <= N_max; ++n) {
    const double dn = static_cast<double>(n);
    partial.add(engine.sum_norm_sq(n) / (dn * dn));
    if (n == next) {
      const double value = partial.value();
      report.points.push_back({n, value, value - previous});
      previous = value;
      next *= 2;
    }
  }
  report.last_increment = report.points.back().increment;

  const auto& p = report.points;
  if (report.last_increment <= kSeriesConvergenceIncrement) {
    report.verdict = SeriesVerdict::converging;
  } else if (p.size() >= 4) {
    bool diverging = true;
    for (std::size_t j = p.size() - 3; j < p.size(); ++j) {
      diverging = diverging && p[j].increment > kSeriesDivergenceFloor &&
                  p[j].increment >= 0.9 * p[j - 1].increment;
    }
    if (diverging) report.verdict = SeriesVerdict::diverging;
  }
  return report;
}

}  // namespace kyfan
