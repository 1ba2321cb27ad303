#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kyfan/sums.hpp"
#include "kyfan/tolerance.hpp"

namespace kyfan {

enum class Verdict { identity_pass, inequality_pass, fail, precondition_violation };

[[nodiscard]] const char* to_string(Verdict v);

/// One evaluated identity or inequality. Both sides are always carried.
/// For identities residual = |lhs - rhs|; for inequalities (lhs <= rhs)
/// residual = lhs - rhs, so negative residual is slack.
struct CheckReport {
  std::string check;
  std::string model;
  std::map<std::string, double> inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::fail;
  std::string note;

  [[nodiscard]] bool passed() const {
    return verdict == Verdict::identity_pass || verdict == Verdict::inequality_pass;
  }
};

/// Positive subadditive norming sequence alpha_n.
class NormingSequence {
 public:
  static NormingSequence linear();
  /// alpha_n = n^delta, 0 <= delta <= 1.
  static NormingSequence power(double delta);
  /// alpha_1..alpha_L; queries beyond L throw.
  static NormingSequence table(std::vector<double> values);

  [[nodiscard]] double operator()(std::int64_t n) const;
  [[nodiscard]] bool subadditive_at(std::int64_t n, std::int64_t m, const Tolerance& tol) const;
  [[nodiscard]] std::string describe() const;
  [[nodiscard]] std::optional<double> delta() const;

 private:
  enum class Kind { linear, power, table };
  Kind kind_ = Kind::linear;
  double delta_ = 1.0;
  std::vector<double> values_;
};

/// Ky Fan identity: s_n/n + s_m/m - s_{n+m}/(n+m) = (n(n+m)/m) ||S_n/n - S_{n+m}/(n+m)||^2.
/// Throws NotStationaryError on contraction orbits.
CheckReport kyfan_identity(GramEngine& engine, std::int64_t n, std::int64_t m, const Tolerance& tol = {});

/// Same two sides as an inequality (lhs is the normalized difference), valid
/// whenever ||S_{n+m} - S_n|| <= ||S_m||. That condition is spot-checked at (n, m).
CheckReport kyfan_inequality(GramEngine& engine, std::int64_t n, std::int64_t m, const Tolerance& tol = {});

/// Norming-sequence generalization:
/// (a_n a_{n+m} / a_m) ||S_n/a_n - S_{n+m}/a_{n+m}||^2
///   <= s_n/a_n + s_m/a_m - (s_{n+m}/a_{n+m}) (a_{n+m} - a_n)/a_m.
CheckReport lemma1_inequality(GramEngine& engine, const NormingSequence& alpha, std::int64_t n,
                              std::int64_t m, const Tolerance& tol = {});

/// s_{n+m}/(n+m) <= s_n/n + s_m/m.
CheckReport superadditivity_check(GramEngine& engine, std::int64_t n, std::int64_t m,
                                  const Tolerance& tol = {});

enum class NamedCheck { identity, inequality, lemma1, superadd };

/// "kyfan.identity" | "kyfan.inequality" | "kyfan.lemma1" | "kyfan.superadd".
[[nodiscard]] NamedCheck parse_check_name(std::string_view name);
[[nodiscard]] const char* to_string(NamedCheck check);

CheckReport run_check(GramEngine& engine, NamedCheck check, std::int64_t n, std::int64_t m,
                      const std::optional<NormingSequence>& alpha, const Tolerance& tol);

struct ScanOptions {
  NamedCheck check = NamedCheck::identity;
  std::int64_t n_max = 64;
  std::int64_t m_max = 64;
  /// 0 means exhaustive over [1, n_max] x [1, m_max].
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<NormingSequence> alpha;
  Tolerance tol;
  int workers = 1;
  std::size_t keep_failures = 16;
};

struct ScanReport {
  std::string check;
  std::string model;
  std::int64_t cells = 0;
  std::int64_t failures = 0;
  std::int64_t precondition_violations = 0;
  std::int64_t errors = 0;
  double worst_residual = 0.0;
  double worst_excess = 0.0;  // max(residual - tolerance)
  std::int64_t worst_n = 0;
  std::int64_t worst_m = 0;
  double mean_residual = 0.0;
  std::vector<CheckReport> failing;
  std::vector<std::string> error_messages;

  [[nodiscard]] bool clean() const { return failures == 0 && errors == 0; }
};

/// Runs a named check over a grid. Each worker owns its own engine; the
/// aggregate is reduced in cell order, so it is identical for any worker count.
ScanReport scan(const StationaryModel& model, const ScanOptions& options);

}  // namespace kyfan
