#include "kyfan/fsup.hpp"

#include <cmath>
#include <limits>

namespace kyfan {

void FSupTable::extend_to(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("f^2 index must be >= 1");
  while (size() < n) {
    const std::int64_t k = size() + 1;
    const double v = engine_->sum_norm_sq(k) / static_cast<double>(k);
    if (values_.empty() || v > values_.back()) {
      values_.push_back(v);
      argmax_.push_back(k);
    } else {
      values_.push_back(values_.back());
      argmax_.push_back(argmax_.back());
    }
  }
}

double FSupTable::f_sq(std::int64_t n) {
  extend_to(n);
  return values_[static_cast<std::size_t>(n - 1)];
}

std::int64_t FSupTable::argmax(std::int64_t n) {
  extend_to(n);
  return argmax_[static_cast<std::size_t>(n - 1)];
}

double f_sq(GramEngine& engine, std::int64_t n) {
  FSupTable table(engine);
  return table.f_sq(n);
}

SubadditivityReport subadditivity_scan(GramEngine& engine, std::int64_t n_max, const Tolerance& tol) {
  FSupTable table(engine);
  SubadditivityReport r;
  r.n_max = n_max;
  r.worst_slack = std::numeric_limits<double>::infinity();
  for (std::int64_t n = 1; n < n_max; ++n) {
    for (std::int64_t m = 1; n + m <= n_max; ++m) {
      const double a = table.f_sq(n), b = table.f_sq(m), c = table.f_sq(n + m);
      const double slack = a + b - c;
      const double bound = tol.bound({a, b, c});
      ++r.pairs;
      if (slack < -bound) ++r.failures;
      if (std::abs(slack) <= bound) ++r.equality_cases;
      if (slack < r.worst_slack) {
        r.worst_slack = slack;
        r.worst_n = n;
        r.worst_m = m;
      }
    }
  }
  if (r.pairs == 0) r.worst_slack = 0.0;
  return r;
}

IRatioReport prop_iratio(FSupTable& table, std::int64_t x, std::int64_t y, const Tolerance& tol) {
  if (x < 1 || y < 1) throw std::invalid_argument("x and y must be >= 1");
  IRatioReport out;
  out.x = x;
  out.y = y;
  const double dx = static_cast<double>(x), dy = static_cast<double>(y);
  const double fxy = table.f_sq(x + y), fx = table.f_sq(x), fy = table.f_sq(y);
  if (!(fxy > 0.0) || !(fy > 0.0)) throw UndefinedRatioError("I undefined: f vanishes");

  out.I = (fxy - fx + fy) / (2.0 * std::sqrt(fxy) * std::sqrt(fy));
  out.sharp_bound = std::sqrt(dy / (dx + dy));
  out.stated_bound = 2.0 * out.sharp_bound;
  out.p = fxy / (dx + dy);
  out.q = fy / dy;
  out.r = fx / dx;
  out.condition_met = out.r >= out.q;
  out.tolerance = tol.bound({out.I, out.stated_bound});
  out.subadditivity_holds = fxy <= fx + fy + tol.bound({fx, fy, fxy});
  if (out.condition_met) {
    out.stated_bound_holds = out.I <= out.stated_bound + out.tolerance;
    out.sharp_bound_holds = out.I <= out.sharp_bound + out.tolerance;
  }
  return out;
}

IRatioScan iratio_scan(GramEngine& engine, std::int64_t max_xy, const Tolerance& tol) {
  FSupTable table(engine);
  IRatioScan s;
  s.worst_stated_excess = -std::numeric_limits<double>::infinity();
  s.worst_sharp_excess = -std::numeric_limits<double>::infinity();
  for (std::int64_t x = 1; x <= max_xy; ++x) {
    for (std::int64_t y = 1; y <= max_xy; ++y) {
      const auto r = prop_iratio(table, x, y, tol);
      ++s.pairs;
      if (!r.subadditivity_holds) ++s.subadditivity_violations;
      if (!r.condition_met) continue;
      ++s.condition_pairs;
      if (!r.stated_bound_holds) ++s.stated_violations;
      if (!r.sharp_bound_holds) ++s.sharp_violations;
      s.worst_stated_excess = std::max(s.worst_stated_excess, r.I - r.stated_bound);
      s.worst_sharp_excess = std::max(s.worst_sharp_excess, r.I - r.sharp_bound);
    }
  }
  return s;
}

}  // namespace kyfan
