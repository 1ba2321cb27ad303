#pragma once

#include <cstdint>

#include "kyfan/models.hpp"

namespace kyfan {

/// Counter-based generator: draw k of stream s is SplitMix64(seed, s, k).
/// The same (seed, stream, counter) triple gives the same bits everywhere.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  [[nodiscard]] static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream,
                                         std::uint64_t counter);

  std::uint64_t next() { return mix(seed_, stream_, counter_++); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Standard normal via Box-Muller.
  double normal();

  [[nodiscard]] std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

[[nodiscard]] SpectralAtomsModel random_spectral(CounterRng& rng, int max_atoms);
[[nodiscard]] CovarianceModel random_ar1(CounterRng& rng);
[[nodiscard]] CovarianceModel random_cosine(CounterRng& rng);

/// Haar-distributed unitary (QR of a complex Ginibre matrix, phases fixed).
[[nodiscard]] Eigen::MatrixXcd random_unitary(CounterRng& rng, int dim);

/// Unitary orbit of dimension 1..max_dim with a random unit x0.
[[nodiscard]] OperatorOrbitModel random_unitary_orbit(CounterRng& rng, int max_dim);

/// Unitary T = Q diag(e^{i phi}) Q* with `fixed_dims` eigenphases exactly 0 and
/// the remaining ones at distance >= min_gap from 0.
[[nodiscard]] OperatorOrbitModel random_unitary_with_fixed_space(CounterRng& rng, int dim,
                                                                 int fixed_dims, double min_gap);

/// Random matrix rescaled to operator norm in (0, 1].
[[nodiscard]] OperatorOrbitModel random_contraction_orbit(CounterRng& rng, int max_dim);

/// T = diag(e^{i theta_j}), x0 = (sqrt(w_j)): same covariance as the atoms.
[[nodiscard]] OperatorOrbitModel diagonal_unitary(const SpectralAtomsModel& spectral);

}  // namespace kyfan
