#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kyfan/sums.hpp"
#include "kyfan/tolerance.hpp"

namespace kyfan {

/// I(f, x, y) is undefined when f vanishes (identically zero model).
class UndefinedRatioError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// f^2(n) = max_{n' <= n} ||S_{n'}||^2 / n', built incrementally.
class FSupTable {
 public:
  explicit FSupTable(GramEngine& engine) : engine_(&engine) {}

  double f_sq(std::int64_t n);
  std::int64_t argmax(std::int64_t n);
  [[nodiscard]] std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }

 private:
  void extend_to(std::int64_t n);

  GramEngine* engine_;
  std::vector<double> values_;
  std::vector<std::int64_t> argmax_;
};

double f_sq(GramEngine& engine, std::int64_t n);

struct SubadditivityReport {
  std::int64_t n_max = 0;
  std::int64_t pairs = 0;
  std::int64_t failures = 0;
  std::int64_t equality_cases = 0;
  double worst_slack = 0.0;  // min of f^2(n) + f^2(m) - f^2(n+m)
  std::int64_t worst_n = 0;
  std::int64_t worst_m = 0;
};

/// f^2(n + m) <= f^2(n) + f^2(m) for all n + m <= n_max.
SubadditivityReport subadditivity_scan(GramEngine& engine, std::int64_t n_max, const Tolerance& tol = {});

struct IRatioReport {
  std::int64_t x = 0;
  std::int64_t y = 0;
  double I = 0.0;
  double stated_bound = 0.0;  // 2 sqrt(y / (x + y))
  double sharp_bound = 0.0;  // sqrt(y / (x + y))
  double p = 0.0;            // f^2(x+y) / (x+y)
  double q = 0.0;            // f^2(y) / y
  double r = 0.0;            // f^2(x) / x
  bool condition_met = false;  // r >= q
  bool stated_bound_holds = true;
  bool sharp_bound_holds = true;
  bool subadditivity_holds = true;  // p (x+y) <= r x + q y
  double tolerance = 0.0;
};

/// I = (f^2(x+y) - f^2(x) + f^2(y)) / (2 f(x+y) f(y)). The bounds are only
/// asserted (holds flags can go false) when condition_met.
IRatioReport prop_iratio(FSupTable& table, std::int64_t x, std::int64_t y, const Tolerance& tol = {});

struct IRatioScan {
  std::int64_t pairs = 0;
  std::int64_t condition_pairs = 0;
  std::int64_t stated_violations = 0;
  std::int64_t sharp_violations = 0;
  std::int64_t subadditivity_violations = 0;
  double worst_stated_excess = 0.0;  // max I - stated_bound under the condition
  double worst_sharp_excess = 0.0;
};

/// All 1 <= x, y <= max_xy.
IRatioScan iratio_scan(GramEngine& engine, std::int64_t max_xy, const Tolerance& tol = {});

}  // namespace kyfan
