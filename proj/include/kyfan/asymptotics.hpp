#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kyfan/sums.hpp"
#include "kyfan/tolerance.hpp"

namespace kyfan {

using RealSequence = std::function<double(std::int64_t)>;

/// Running infimum of g_n / n for n = 1..N. For subadditive g the limit of
/// g_n / n is the infimum, so running_inf at N is the estimate.
struct FeketeTrace {
  std::int64_t horizon = 0;
  std::vector<double> values;       // g_n / n, index n - 1
  std::vector<double> running_inf;  // nonincreasing
  std::vector<std::int64_t> argmin; // first n attaining running_inf
  double gap = 0.0;                 // g_N / N - running_inf(N)
  std::int64_t spot_checks = 0;
  std::vector<std::string> warnings;

  [[nodiscard]] double estimate() const { return running_inf.back(); }
};

/// `spot_checks` random pairs (n, m), n + m <= N, are tested for
/// g_{n+m} <= g_n + g_m; failures become warnings.
FeketeTrace fekete_limit(const RealSequence& g, std::int64_t N, std::int64_t spot_checks = 0,
                         std::uint64_t seed = 0, const Tolerance& tol = {});

struct CesaroPoint {
  std::int64_t N = 0;
  double lim_estimate = 0.0;  // ||S_N / N||
  double inf_estimate = 0.0;  // min_{n <= N} ||S_n / n||
  double agreement = 0.0;     // lim - inf
};

struct CesaroReport {
  std::int64_t N = 0;
  double lim_estimate = 0.0;
  double inf_estimate = 0.0;
  std::int64_t inf_argmin = 0;
  double agreement = 0.0;
  std::vector<CesaroPoint> trend;  // doubling schedule 1, 2, 4, ..., plus N
  bool trend_nonincreasing = true;
  bool stationary = true;
};

/// lim ||S_n / n|| against inf ||S_n / n||. Contraction orbits are accepted and
/// flagged non-stationary (trend evidence only).
CesaroReport cesaro_limit(GramEngine& engine, std::int64_t N, const Tolerance& tol = {});

/// Projection of X_1 onto ker(T - I) and the Cesaro residuals ||S_n/n - chi||.
struct ProjectionReport {
  Eigen::VectorXcd chi;
  double chi_norm = 0.0;
  std::int64_t fixed_dim = 0;
  std::vector<std::int64_t> schedule;
  std::vector<double> residuals;
  /// Largest cosine between ker(T - I) and range(I - T); 0 for unitary T.
  double riesz_angle = 0.0;
  /// Distance from 1 of the nearest eigenvalue outside the fixed space.
  double eigen_gap = 0.0;
  /// C in ||S_n/n - chi|| <= C/n, C = 2 ||x0|| / eigen_gap.
  double rate_constant = 0.0;
  bool rate_bound_holds = true;
};

/// Kernel threshold: singular values of T - I below 1e-8 ||T||.
ProjectionReport fixed_space_projection(const OperatorOrbitModel& orbit, std::int64_t N,
                                        const Tolerance& tol = {});

struct DensityReport {
  std::int64_t N = 0;
  double epsilon = 0.0;
  double cesaro_mean = 0.0;           // (1/N) sum |a_k|
  double density_of_small_set = 0.0;  // |{k <= N : |a_k| <= eps}| / N
  double max_abs = 0.0;
  double max_abs_first_half = 0.0;
  bool bounded_reliable = true;  // max did not grow over the second half
  bool consistent_with_zero = false;
};

DensityReport density_limit(const RealSequence& a, std::int64_t N, double epsilon);

}  // namespace kyfan
