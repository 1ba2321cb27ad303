#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kyfan/checks.hpp"
#include "kyfan/sums.hpp"
#include "kyfan/tolerance.hpp"

namespace kyfan {

/// Strictly increasing positive integers n_1 < n_2 < ...
class IndexSequence {
 public:
  enum class Kind { explicit_list, arithmetic, geometric, squares, custom };

  static IndexSequence explicit_list(std::vector<std::int64_t> values);
  static IndexSequence arithmetic(std::int64_t step);  // n_k = step * k
  static IndexSequence geometric(std::int64_t base);   // n_k = base^k
  static IndexSequence squares();                      // n_k = k^2
  static IndexSequence custom(std::function<std::int64_t(std::int64_t)> generator,
                              std::string gap_law);

  /// "arithmetic:3", "geometric:2", "squares", "list:1,2,5" or "file:<path>"
  /// (whitespace-separated integers).
  static IndexSequence parse(std::string_view spec);

  /// n_k for k >= 1. Throws std::out_of_range past the end of a list or on
  /// 64-bit overflow, std::domain_error if a custom generator is not increasing.
  [[nodiscard]] std::int64_t at(std::int64_t k) const;
  [[nodiscard]] std::optional<std::int64_t> size() const;
  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string describe() const;

 private:
  Kind kind_ = Kind::arithmetic;
  std::int64_t parameter_ = 1;
  std::vector<std::int64_t> values_;
  std::function<std::int64_t(std::int64_t)> generator_;
  std::string gap_law_;
};

/// D_1 | D_2 | ...: D_{j+1} = D_j * ratios[j-1].
class ChainSpec {
 public:
  ChainSpec(std::int64_t d1, std::vector<std::int64_t> ratios);
  /// D_j = base^j for j = 1..depth+1.
  static ChainSpec geometric(std::int64_t base, std::int64_t depth);

  /// D_j, 1 <= j <= depth() + 1.
  [[nodiscard]] std::int64_t D(std::int64_t j) const;
  [[nodiscard]] std::int64_t ratio(std::int64_t j) const { return ratios_.at(static_cast<std::size_t>(j - 1)); }
  [[nodiscard]] std::int64_t depth() const { return static_cast<std::int64_t>(ratios_.size()); }

 private:
  std::vector<std::int64_t> values_;
  std::vector<std::int64_t> ratios_;
};

/// R = ||S_a/a - S_b/b||^2 / (1/a - 1/b), a < b.
double ratio_statistic(GramEngine& engine, std::int64_t a, std::int64_t b);

struct RatioTerm {
  double ratio = 0.0;
  /// s_a/a - s_b/b + s_{b-a}/(b-a), equal to the ratio for stationary models.
  double decomposition = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
};

RatioTerm ratio_with_decomposition(GramEngine& engine, std::int64_t a, std::int64_t b,
                                   const Tolerance& tol = {});

enum class Normalization { by_nN, by_count };

[[nodiscard]] const char* to_string(Normalization n);
[[nodiscard]] Normalization parse_normalization(std::string_view s);

struct RatioReport {
  std::string sequence;
  std::int64_t N = 0;
  Normalization normalization = Normalization::by_nN;
  std::vector<double> ratios;  // R_k, k = 1..N-1
  double raw_sum = 0.0;
  double normalized_sum = 0.0;
  /// s_{n_1}/n_1 - s_{n_N}/n_N + sum_k s_{d_k}/d_k with gaps d_k.
  double telescoped_sum = 0.0;
  double telescoping_residual = 0.0;
  double decomposition_residual = 0.0;  // max_k |R_k - decomposition_k|
  double tolerance = 0.0;
  /// sup_{k<N} |s_{d_k}/d_k^2 - s_{n_N}/n_N^2|
  double comparator = 0.0;
  bool identity_holds = true;
};

/// Sums the N-1 ratios along the first N sequence terms. by_nN divides by
/// n_N; by_count divides by the number of ratios.
RatioReport ratio_sum(GramEngine& engine, const IndexSequence& seq, std::int64_t N,
                      Normalization normalization, const Tolerance& tol = {});

/// Arithmetic progression n_k = a k: lhs = (1/(Na)) sum_{k<N} R_k equals
/// rhs = s_a/a^2 - s_{aN}/(aN)^2.
struct ArithmeticReport {
  CheckReport check;
  /// (1/(Na)) sum_k ||k(S_{a(k+1)} - S_{ak}) - S_{ak}||^2, taken literally.
  double c_statistic = 0.0;
  /// Same sum with each term divided by a k (k+1); equals lhs.
  double c_statistic_weighted = 0.0;
  double weighted_residual = 0.0;
  /// Whether the literal statistic matches lhs (generally it does not).
  bool literal_matches_lhs = false;
};

ArithmeticReport arithmetic_identity(GramEngine& engine, std::int64_t a, std::int64_t N,
                                     const Tolerance& tol = {});

struct ChainReport {
  std::vector<std::int64_t> D;         // D_1..D_{J+1}
  std::vector<double> terms;           // level j contribution
  std::vector<double> partial_sums;
  std::vector<double> telescoped;      // (|S_{D_1}|/D_1)^2 - (|S_{D_{j+1}}|/D_{j+1})^2
  std::vector<double> residuals;
  double tolerance = 0.0;
  double total = 0.0;
  /// (|S_{D_{J+1}}|/D_{J+1})^2 - min_{n <= D_{J+1}} |S_n/n|^2.
  double tail_estimate = 0.0;
  bool residuals_ok = true;
  bool partial_sums_nondecreasing = true;
};

ChainReport chain_series(GramEngine& engine, const ChainSpec& chain, std::int64_t J,
                         const Tolerance& tol = {});

/// Removes the mean-ergodic component: drops theta = 0 atoms of spectral
/// models, subtracts the fixed-space projection from unitary orbits. Covariance
/// models are rejected.
StationaryModel recenter(const StationaryModel& model);

struct TrendPoint {
  std::int64_t N = 0;
  double value = 0.0;
};

struct TrendReport {
  std::vector<TrendPoint> points;
  bool nonincreasing = true;
};

/// by_nN-normalized ratio sums of the re-centered model at N = 2, 4, ..., N_max.
TrendReport gap_divergent_trend(const StationaryModel& model, const IndexSequence& seq,
                                std::int64_t N_max, const Tolerance& tol = {});

}  // namespace kyfan
