#include "kyfan/sums.hpp"

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "kyfan/summation.hpp"

namespace kyfan {

namespace {

void require_index(std::int64_t value, std::int64_t min, const char* name) {
  if (value < min) {
    throw std::invalid_argument(std::string(name) + " must be >= " + std::to_string(min));
  }
}

// sin(k * theta) with the product's rounding error folded back in.
double accurate_sin(double k, double theta) { return unit_phase(k, theta).imag(); }

}  // namespace

double dirichlet_kernel_sq(double theta, std::int64_t n) {
  if (n <= 0) return 0.0;
  const double nn = static_cast<double>(n);
  if (theta == 0.0) return nn * nn;
  if (std::abs(theta) < 1e-7 && nn * std::abs(theta) < 1e-4) {
    return nn * nn * (1.0 - (nn * nn - 1.0) * theta * theta / 12.0);
  }
  const double ratio = accurate_sin(nn, theta / 2.0) / std::sin(theta / 2.0);
  return ratio * ratio;
}

cplx dirichlet_sum(double theta, std::int64_t n) {
  if (n <= 0) return {};
  const double nn = static_cast<double>(n);
  if (theta == 0.0) return nn;
  double amplitude;
  if (std::abs(theta) < 1e-7 && nn * std::abs(theta) < 1e-4) {
    amplitude = nn * (1.0 - (nn * nn - 1.0) * theta * theta / 24.0);
  } else {
    amplitude = accurate_sin(nn, theta / 2.0) / std::sin(theta / 2.0);
  }
  // D_n = e^{i(n+1)theta/2} sin(n theta/2) / sin(theta/2)
  return amplitude * unit_phase(nn + 1.0, theta / 2.0);
}

namespace {

struct CovarianceBackend {
  CovarianceModel model;
  std::vector<cplx> gamma;     // cached lags 0..gamma.size()-1
  std::vector<double> s{0.0};  // s[n] = ||S_n||^2
  CompensatedSum prefix;       // sum_{h < s.size()-1} Re gamma(h)
  CompensatedSum running;      // s.back()

  explicit CovarianceBackend(CovarianceModel m) : model(std::move(m)) {}

  const cplx& lag(std::int64_t h) {
    while (static_cast<std::int64_t>(gamma.size()) <= h) {
      cplx g = model.gamma(static_cast<std::int64_t>(gamma.size()));
      if (gamma.empty()) g = g.real();
      gamma.push_back(g);
    }
    return gamma[static_cast<std::size_t>(h)];
  }

  void extend_to(std::int64_t n) {
    if (model.bounded_horizon() && n - 1 > model.horizon) throw HorizonError(n - 1, model.horizon);
    s.reserve(static_cast<std::size_t>(n) + 1);
    while (static_cast<std::int64_t>(s.size()) <= n) {
      const auto next = static_cast<std::int64_t>(s.size());  // computing s[next]
      prefix.add(lag(next - 1).real());
      running.add(2.0 * prefix.value());
      running.add(-gamma[0].real());
      s.push_back(running.value());
    }
  }

  double sum_norm_sq(std::int64_t n) {
    extend_to(n);
    return s[static_cast<std::size_t>(n)];
  }

  // sum over index pairs (j <= n, k <= n+m) of gamma(j - k), grouped by lag.
  cplx cross_inner(std::int64_t n, std::int64_t m) {
    const std::int64_t total = n + m;
    if (model.bounded_horizon() && total - 1 > model.horizon) throw HorizonError(total - 1, model.horizon);
    CompensatedComplexSum sum;
    for (std::int64_t d = 0; d < n; ++d) sum.add(static_cast<double>(n - d) * lag(d));
    for (std::int64_t e = 1; e < total; ++e) {
      const std::int64_t count = std::min(n, total - e);
      sum.add(static_cast<double>(count) * std::conj(lag(e)));
    }
    return sum.value();
  }
};

struct SpectralBackend {
  SpectralAtomsModel model;

  double sum_norm_sq(std::int64_t n) const {
    CompensatedSum sum;
    for (const auto& a : model.atoms) sum.add(a.weight * dirichlet_kernel_sq(a.theta, n));
    return sum.value();
  }

  cplx cross_inner(std::int64_t n, std::int64_t m) const {
    CompensatedComplexSum sum;
    for (const auto& a : model.atoms) {
      sum.add(a.weight * dirichlet_sum(a.theta, n) * std::conj(dirichlet_sum(a.theta, n + m)));
    }
    return sum.value();
  }
};

// Compensated running vector sum with the current orbit point.
struct OrbitState {
  Eigen::VectorXcd v;     // T^n x0
  Eigen::VectorXcd sum;   // S_n (leading part)
  Eigen::VectorXcd comp;  // compensation
};

void neumaier_add(double& sum, double& comp, double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x)) {
    comp += (sum - t) + x;
  } else {
    comp += (x - t) + sum;
  }
  sum = t;
}

struct OrbitBackend {
  OperatorOrbitModel model;
  std::vector<OrbitState> checkpoints;  // state at n = j * stride
  OrbitState current;
  std::int64_t current_n = 0;
  std::vector<double> s{0.0};

  explicit OrbitBackend(OperatorOrbitModel m) : model(std::move(m)) {
    const auto d = model.x0.size();
    current = OrbitState{model.x0, Eigen::VectorXcd::Zero(d), Eigen::VectorXcd::Zero(d)};
    checkpoints.push_back(current);
  }

  void step(OrbitState& st) const {
    st.v = model.T * st.v;
    for (Eigen::Index i = 0; i < st.v.size(); ++i) {
      double re = st.sum(i).real(), im = st.sum(i).imag();
      double cre = st.comp(i).real(), cim = st.comp(i).imag();
      neumaier_add(re, cre, st.v(i).real());
      neumaier_add(im, cim, st.v(i).imag());
      st.sum(i) = {re, im};
      st.comp(i) = {cre, cim};
    }
  }

  static Eigen::VectorXcd value(const OrbitState& st) { return st.sum + st.comp; }

  static double norm_sq(const Eigen::VectorXcd& x) {
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < x.size(); ++i) acc.add(std::norm(x(i)));
    return acc.value();
  }

  void extend_to(std::int64_t n) {
    s.reserve(static_cast<std::size_t>(n) + 1);
    while (current_n < n) {
      step(current);
      ++current_n;
      s.push_back(norm_sq(value(current)));
      if (current_n % GramEngine::kCheckpointStride == 0) checkpoints.push_back(current);
    }
  }

  double sum_norm_sq(std::int64_t n) {
    extend_to(n);
    return s[static_cast<std::size_t>(n)];
  }

  Eigen::VectorXcd vector_at(std::int64_t n) {
    extend_to(n);
    if (n == current_n) return value(current);
    const auto idx = static_cast<std::size_t>(n / GramEngine::kCheckpointStride);
    OrbitState st = checkpoints[idx];
    for (std::int64_t k = static_cast<std::int64_t>(idx) * GramEngine::kCheckpointStride; k < n; ++k) {
      step(st);
    }
    return value(st);
  }

  cplx cross_inner(std::int64_t n, std::int64_t m) {
    const Eigen::VectorXcd far = vector_at(n + m);
    const Eigen::VectorXcd near = vector_at(n);
    return far.dot(near);  // sum near_i * conj(far_i)
  }
};

using Backend = std::variant<CovarianceBackend, SpectralBackend, OrbitBackend>;

Backend make_backend(StationaryModel model) {
  check_well_formed(model);
  if (auto* cov = std::get_if<CovarianceModel>(&model)) return CovarianceBackend(std::move(*cov));
  if (auto* spec = std::get_if<SpectralAtomsModel>(&model)) return SpectralBackend{std::move(*spec)};
  return OrbitBackend{std::get<OperatorOrbitModel>(std::move(model))};
}

}  // namespace

struct GramEngine::Impl {
  StationaryModel model;
  Backend backend;
  bool stationary;

  explicit Impl(StationaryModel m)
      : model(m), backend(make_backend(std::move(m))), stationary(is_stationary(model)) {}
};

GramEngine::GramEngine(StationaryModel model) : impl_(std::make_unique<Impl>(std::move(model))) {}
GramEngine::~GramEngine() = default;
GramEngine::GramEngine(GramEngine&&) noexcept = default;
GramEngine& GramEngine::operator=(GramEngine&&) noexcept = default;

const StationaryModel& GramEngine::model() const noexcept { return impl_->model; }
bool GramEngine::stationary() const noexcept { return impl_->stationary; }

double GramEngine::sum_norm_sq(std::int64_t n) {
  require_index(n, 0, "n");
  const double v = std::visit([n](auto& b) { return b.sum_norm_sq(n); }, impl_->backend);
  return std::max(v, 0.0);
}

cplx GramEngine::cross_inner(std::int64_t n, std::int64_t m) {
  require_index(n, 0, "n");
  require_index(m, 0, "m");
  return std::visit([n, m](auto& b) { return b.cross_inner(n, m); }, impl_->backend);
}

double GramEngine::increment_norm_sq(std::int64_t n, std::int64_t m) {
  require_index(n, 0, "n");
  require_index(m, 1, "m");
  if (auto* orbit = std::get_if<OrbitBackend>(&impl_->backend)) {
    return OrbitBackend::norm_sq(orbit->vector_at(n + m) - orbit->vector_at(n));
  }
  if (n == 0) return sum_norm_sq(m);
  const double v = sum_norm_sq(n + m) - 2.0 * cross_inner(n, m).real() + sum_norm_sq(n);
  return std::max(v, 0.0);
}

double GramEngine::normalized_diff_sq(std::int64_t n, std::int64_t m, double a_n, double a_nm) {
  require_index(n, 1, "n");
  require_index(m, 0, "m");
  if (!(a_n > 0.0) || !(a_nm > 0.0)) throw std::invalid_argument("norming factors must be positive");
  if (auto* orbit = std::get_if<OrbitBackend>(&impl_->backend)) {
    return OrbitBackend::norm_sq(orbit->vector_at(n) / a_n - orbit->vector_at(n + m) / a_nm);
  }
  if (auto* spectral = std::get_if<SpectralBackend>(&impl_->backend)) {
    CompensatedSum sum;
    for (const auto& a : spectral->model.atoms) {
      sum.add(a.weight * std::norm(dirichlet_sum(a.theta, n) / a_n - dirichlet_sum(a.theta, n + m) / a_nm));
    }
    return sum.value();
  }
  const double v = sum_norm_sq(n) / (a_n * a_n) + sum_norm_sq(n + m) / (a_nm * a_nm) -
                   2.0 * cross_inner(n, m).real() / (a_n * a_nm);
  return std::max(v, 0.0);
}

SumStats GramEngine::stats(std::int64_t n, std::int64_t m) {
  SumStats st;
  st.n = n;
  st.m = m;
  st.s_n = sum_norm_sq(n);
  st.s_m = sum_norm_sq(m);
  st.s_nm = sum_norm_sq(n + m);
  st.cross = cross_inner(n, m);
  st.inc = increment_norm_sq(n, m);
  return st;
}

Eigen::VectorXcd GramEngine::partial_sum_vector(std::int64_t n) {
  require_index(n, 0, "n");
  auto* orbit = std::get_if<OrbitBackend>(&impl_->backend);
  if (orbit == nullptr) throw std::logic_error("partial_sum_vector requires an orbit model");
  return orbit->vector_at(n);
}

}  // namespace kyfan
