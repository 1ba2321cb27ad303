#pragma once

#include <cstdint>
#include <vector>

#include "kyfan/models.hpp"
#include "kyfan/tolerance.hpp"

namespace kyfan {

/// (I - T)^alpha applied to the generating element. Spectral weights become
/// w |1 - e^{i theta}|^{2 alpha}; orbit models map x0 to (I - T)^alpha x0
/// through the spectral decomposition of a normal T (principal branch).
struct FractionalTransform {
  double alpha = 0.5;
  StationaryModel source;
  StationaryModel transformed;
};

/// Throws std::invalid_argument for covariance models, non-normal T, or
/// alpha outside (0, 1).
FractionalTransform apply_fractional(const StationaryModel& model, double alpha);

/// Same transform with any alpha > 0 (composition checks need alpha + beta >= 1).
StationaryModel fractional_power(const StationaryModel& model, double alpha);

struct DecayPoint {
  std::int64_t n = 0;
  double value = 0.0;     // ||S_n|| / n^{1 - alpha}
  double envelope = 0.0;  // max of value over (n/2, n]
};

struct DecayTrace {
  double alpha = 0.0;
  double epsilon = 0.0;
  std::vector<DecayPoint> points;  // n = 1, 2, 4, ..., N
  bool envelope_nonincreasing = true;
  double final_envelope = 0.0;
  bool vanishing = false;
};

DecayTrace decay_trace(const FractionalTransform& transform, std::int64_t N, double epsilon = 0.05,
                       const Tolerance& tol = {});

enum class SeriesVerdict { converging, diverging, inconclusive };

[[nodiscard]] const char* to_string(SeriesVerdict v);

struct SeriesPoint {
  std::int64_t N = 0;
  double partial_sum = 0.0;  // sum_{n <= N} ||S_n||^2 / n^2
  double increment = 0.0;    // partial(N) - partial(N/2)
};

struct SeriesReport {
  std::vector<SeriesPoint> points;  // N = 1, 2, 4, ..., N_max
  SeriesVerdict verdict = SeriesVerdict::inconclusive;
  double last_increment = 0.0;
};

inline constexpr double kSeriesConvergenceIncrement = 1e-4;
inline constexpr double kSeriesDivergenceFloor = 1e-3;

/// Converging iff the last doubling increment is <= 1e-4. Diverging iff the
/// last three increments all exceed 1e-3 and none drops below 0.9x its
/// predecessor. Otherwise inconclusive.
SeriesReport membership_series(const StationaryModel& model, std::int64_t N_max);

}  // namespace kyfan
