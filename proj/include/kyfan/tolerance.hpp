#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace kyfan {

/// Uniform slack: residual <= abs + rel * max(1, |quantities involved|).
struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-9;

  [[nodiscard]] double bound(std::initializer_list<double> quantities) const {
    double scale = 1.0;
    for (double q : quantities) scale = std::max(scale, std::abs(q));
    return abs + rel * scale;
  }
};

}  // namespace kyfan
