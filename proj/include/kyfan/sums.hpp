#pragma once

#include <complex>
#include <cstdint>
#include <memory>

#include "kyfan/models.hpp"

namespace kyfan {

/// K_n(theta) = |sum_{k=1}^n e^{ik theta}|^2 = sin^2(n theta/2) / sin^2(theta/2), K_n(0) = n^2.
[[nodiscard]] double dirichlet_kernel_sq(double theta, std::int64_t n);

/// D_n(theta) = sum_{k=1}^n e^{ik theta}.
[[nodiscard]] cplx dirichlet_sum(double theta, std::int64_t n);

/// Gram data for one (n, m) pair. T_{n,m} = S_{n+m} - S_n.
struct SumStats {
  std::int64_t n = 0;
  std::int64_t m = 0;
  double s_n = 0.0;
  double s_m = 0.0;
  double s_nm = 0.0;
  cplx cross;  // <S_n, S_{n+m}>
  double inc = 0.0;  // ||T_{n,m}||^2
};

/// Computes ||S_n||^2, <S_n, S_{n+m}> and increment norms for any model kind.
///
/// Covariance models accumulate ||S_{n+1}||^2 = ||S_n||^2 + 2 P(n) - gamma(0),
/// P(n) = sum_{h<=n} Re gamma(h), so a monotone scan over n costs O(1) per step.
/// Spectral models evaluate closed-form Dirichlet kernels. Orbit models advance
/// T^n x0 one matrix-vector product at a time and keep checkpoints of the
/// running sum every `kCheckpointStride` steps.
///
/// An engine mutates its caches and is single-writer; use one per worker.
/// Results do not depend on query order.
class GramEngine {
 public:
  static constexpr std::int64_t kCheckpointStride = 64;

  explicit GramEngine(StationaryModel model);
  ~GramEngine();
  GramEngine(GramEngine&&) noexcept;
  GramEngine& operator=(GramEngine&&) noexcept;
  GramEngine(const GramEngine&) = delete;
  GramEngine& operator=(const GramEngine&) = delete;

  [[nodiscard]] const StationaryModel& model() const noexcept;
  [[nodiscard]] bool stationary() const noexcept;

  /// ||S_n||^2 for n >= 0 (S_0 = 0).
  double sum_norm_sq(std::int64_t n);

  /// <S_n, S_{n+m}>, linear in the first slot.
  cplx cross_inner(std::int64_t n, std::int64_t m);

  /// ||S_{n+m} - S_n||^2 for n >= 0, m >= 1.
  double increment_norm_sq(std::int64_t n, std::int64_t m);

  /// ||S_n / a_n - S_{n+m} / a_nm||^2.
  double normalized_diff_sq(std::int64_t n, std::int64_t m, double a_n, double a_nm);

  SumStats stats(std::int64_t n, std::int64_t m);

  /// S_n as a vector; orbit models only.
  Eigen::VectorXcd partial_sum_vector(std::int64_t n);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace kyfan
