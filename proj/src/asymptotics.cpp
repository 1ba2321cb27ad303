#include "kyfan/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "kyfan/sampling.hpp"
#include "kyfan/summation.hpp"

namespace kyfan {

namespace {

std::vector<std::int64_t> doubling_schedule(std::int64_t N) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = 1; n <= N; n *= 2) {
    out.push_back(n);
    if (n > std::numeric_limits<std::int64_t>::max() / 2) break;
  }
  if (out.back() != N) out.push_back(N);
  return out;
}

}  // namespace

FeketeTrace fekete_limit(const RealSequence& g, std::int64_t N, std::int64_t spot_checks,
                         std::uint64_t seed, const Tolerance& tol) {
  if (N < 1) throw std::invalid_argument("horizon must be >= 1");
  FeketeTrace trace;
  trace.horizon = N;
  std::vector<double> raw(static_cast<std::size_t>(N));
  trace.values.reserve(raw.size());
  trace.running_inf.reserve(raw.size());
  trace.argmin.reserve(raw.size());

  double best = std::numeric_limits<double>::infinity();
  std::int64_t best_n = 0;
  for (std::int64_t n = 1; n <= N; ++n) {
    raw[static_cast<std::size_t>(n - 1)] = g(n);
    const double v = raw[static_cast<std::size_t>(n - 1)] / static_cast<double>(n);
    if (v < best) {
      best = v;
      best_n = n;
    }
    trace.values.push_back(v);
    trace.running_inf.push_back(best);
    trace.argmin.push_back(best_n);
  }
  trace.gap = trace.values.back() - best;

  if (N >= 2 && spot_checks > 0) {
    CounterRng rng(seed, 7);
    for (std::int64_t i = 0; i < spot_checks; ++i) {
      const auto n = rng.uniform_int(1, N - 1);
      const auto m = rng.uniform_int(1, N - n);
      const double gn = raw[static_cast<std::size_t>(n - 1)];
      const double gm = raw[static_cast<std::size_t>(m - 1)];
      const double gnm = raw[static_cast<std::size_t>(n + m - 1)];
      if (gnm > gn + gm + tol.bound({gn, gm, gnm})) {
        trace.warnings.push_back("subadditivity fails at (" + std::to_string(n) + ", " +
                                 std::to_string(m) + "); limit = inf no longer guaranteed");
      }
    }
    trace.spot_checks = spot_checks;
  }
  return trace;
}

CesaroReport cesaro_limit(GramEngine& engine, std::int64_t N, const Tolerance& tol) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  CesaroReport report;
  report.N = N;
  report.stationary = engine.stationary();

  const auto schedule = doubling_schedule(N);
  std::size_t next = 0;
  double best = std::numeric_limits<double>::infinity();
  std::int64_t best_n = 0;
  for (std::int64_t n = 1; n <= N; ++n) {
    const double v = std::sqrt(engine.sum_norm_sq(n)) / static_cast<double>(n);
    // Later minima that differ only by roundoff keep the earlier argmin.
    if (v < best - tol.abs || best_n == 0) best_n = n;
    best = std::min(best, v);
    if (next < schedule.size() && schedule[next] == n) {
      report.trend.push_back({n, v, best, v - best});
      ++next;
    }
  }
  const auto& last = report.trend.back();
  report.lim_estimate = last.lim_estimate;
  report.inf_estimate = last.inf_estimate;
  report.inf_argmin = best_n;
  report.agreement = last.agreement;
  for (std::size_t j = 1; j < report.trend.size(); ++j) {
    const double prev = report.trend[j - 1].agreement, cur = report.trend[j].agreement;
    if (cur > prev + tol.bound({prev, cur})) report.trend_nonincreasing = false;
  }
  return report;
}

ProjectionReport fixed_space_projection(const OperatorOrbitModel& orbit, std::int64_t N,
                                        const Tolerance& tol) {
  check_well_formed(orbit);
  const auto d = orbit.T.rows();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
  if ((orbit.T.adjoint() * orbit.T - I).cwiseAbs().maxCoeff() > kUnitaryTolerance) {
    throw std::invalid_argument("fixed_space_projection requires a unitary T");
  }
  if (N < 1) throw std::invalid_argument("N must be >= 1");

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(orbit.T - I, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double t_norm = Eigen::JacobiSVD<Eigen::MatrixXcd>(orbit.T).singularValues()(0);
  const double threshold = 1e-8 * t_norm;
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) >= threshold) ++rank;

  ProjectionReport report;
  report.fixed_dim = d - rank;
  const Eigen::MatrixXcd kernel = svd.matrixV().rightCols(d - rank);
  const Eigen::MatrixXcd range = svd.matrixU().leftCols(rank);

  const Eigen::VectorXcd x1 = orbit.T * orbit.x0;
  report.chi = kernel * (kernel.adjoint() * x1);
  report.chi_norm = report.chi.norm();

  if (kernel.cols() > 0 && range.cols() > 0) {
    const Eigen::MatrixXcd overlap = kernel.adjoint() * range;
    report.riesz_angle = Eigen::JacobiSVD<Eigen::MatrixXcd>(overlap).singularValues()(0);
  }

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(orbit.T, false);
  report.eigen_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double dist = std::abs(eig.eigenvalues()(j) - 1.0);
    if (dist >= threshold) report.eigen_gap = std::min(report.eigen_gap, dist);
  }
  report.rate_constant =
      std::isfinite(report.eigen_gap) ? 2.0 * orbit.x0.norm() / report.eigen_gap : 0.0;

  GramEngine engine(orbit);
  for (std::int64_t n : doubling_schedule(N)) {
    const double nn = static_cast<double>(n);
    const double r = (engine.partial_sum_vector(n) / nn - report.chi).norm();
    report.schedule.push_back(n);
    report.residuals.push_back(r);
    if (r > report.rate_constant / nn + tol.bound({report.chi_norm})) report.rate_bound_holds = false;
  }
  return report;
}

DensityReport density_limit(const RealSequence& a, std::int64_t N, double epsilon) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  DensityReport r;
  r.N = N;
  r.epsilon = epsilon;
  CompensatedSum total;
  std::int64_t small = 0;
  for (std::int64_t k = 1; k <= N; ++k) {
    const double v = std::abs(a(k));
    total.add(v);
    if (v <= epsilon) ++small;
    r.max_abs = std::max(r.max_abs, v);
    if (2 * k <= N) r.max_abs_first_half = r.max_abs;
  }
  if (N == 1) r.max_abs_first_half = r.max_abs;
  r.cesaro_mean = total.value() / static_cast<double>(N);
  r.density_of_small_set = static_cast<double>(small) / static_cast<double>(N);
  r.bounded_reliable = r.max_abs <= r.max_abs_first_half * (1.0 + 1e-9) + 1e-12;
  r.consistent_with_zero = r.cesaro_mean <= epsilon && r.density_of_small_set >= 1.0 - epsilon;
  return r;
}

}  // namespace kyfan
