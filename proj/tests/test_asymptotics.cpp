#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kyfan/asymptotics.hpp"
#include "kyfan/sampling.hpp"

using namespace kyfan;
using std::numbers::pi;

namespace {

SpectralAtomsModel two_point() { return SpectralAtomsModel::from_atoms({{0.0, 0.5}, {pi, 0.5}}); }

}  // namespace

TEST_CASE("fekete on simple subadditive sequences") {
  auto t = fekete_limit([](std::int64_t n) { return static_cast<double>(n + 1); }, 100);
  CHECK(t.estimate() == doctest::Approx(1.01));
  CHECK(t.gap == doctest::Approx(0.0));

  t = fekete_limit([](std::int64_t n) { return static_cast<double>((n + 1) / 2); }, 10);
  CHECK(t.estimate() == 0.5);
  CHECK(t.argmin.back() == 2);
  for (std::size_t i = 1; i < t.running_inf.size(); ++i) CHECK(t.running_inf[i] <= t.running_inf[i - 1]);
}

TEST_CASE("fekete warns on non-subadditive input") {
  const auto t = fekete_limit([](std::int64_t n) { return static_cast<double>(n * n); }, 50, 20, 1);
  CHECK_FALSE(t.warnings.empty());
}

TEST_CASE("fekete on the two-point spectral model") {
  GramEngine engine(two_point());
  const auto t =
      fekete_limit([&](std::int64_t n) { return engine.sum_norm_sq(n) / static_cast<double>(n); }, 10);
  CHECK(t.running_inf[1] == 0.5);
  CHECK(t.argmin[1] == 2);
  for (std::int64_t n = 1; n <= 10; ++n) {
    const double want = 0.5 + (n % 2 ? 0.5 / static_cast<double>(n * n) : 0.0);
    CHECK(t.values[static_cast<std::size_t>(n - 1)] == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("cesaro limits") {
  GramEngine engine(two_point());
  auto r = cesaro_limit(engine, 10000);
  CHECK(std::abs(r.lim_estimate - std::sqrt(0.5)) < 1e-6);
  CHECK(std::abs(r.inf_estimate - std::sqrt(0.5)) < 1e-6);
  CHECK(r.trend_nonincreasing);

  GramEngine constant(CovarianceModel::constant());
  r = cesaro_limit(constant, 500);
  CHECK(r.lim_estimate == doctest::Approx(1.0));
  CHECK(r.inf_estimate == doctest::Approx(1.0));

  GramEngine quarter(SpectralAtomsModel::from_atoms({{pi / 2, 1.0}}));
  r = cesaro_limit(quarter, 4096);
  CHECK(r.inf_estimate < 1e-12);
  CHECK(r.inf_argmin == 4);
  CHECK(r.lim_estimate < 1e-3);
}

TEST_CASE("fixed-space projection") {
  SUBCASE("diag(1, i)") {
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(2, 2);
    T(0, 0) = 1.0;
    T(1, 1) = cplx(0, 1);
    Eigen::VectorXcd x0(2);
    x0 << std::sqrt(0.5), std::sqrt(0.5);
    const auto r = fixed_space_projection(OperatorOrbitModel::make(T, x0, OrbitClass::unitary), 10000);
    CHECK(std::abs(r.chi_norm - std::sqrt(0.5)) < 1e-10);
    CHECK(std::abs(r.chi(0) - cplx(std::sqrt(0.5))) < 1e-12);
    CHECK(r.riesz_angle <= 1e-9);
    for (std::size_t i = 0; i < r.schedule.size(); ++i) {
      CHECK(r.residuals[i] <= 2.0 / static_cast<double>(r.schedule[i]));
    }
    CHECK(r.residuals.back() <= 2e-4 * std::sqrt(0.5) + 1e-12);
  }
  SUBCASE("identity keeps x0") {
    const auto r = fixed_space_projection(
        OperatorOrbitModel::make(Eigen::MatrixXcd::Identity(3, 3), Eigen::VectorXcd::Ones(3), OrbitClass::unitary),
        64);
    CHECK(r.fixed_dim == 3);
    CHECK(r.chi_norm == doctest::Approx(std::sqrt(3.0)));
    for (double res : r.residuals) CHECK(res < 1e-12);
  }
  SUBCASE("diag(-1) has no fixed vector") {
    Eigen::MatrixXcd T(1, 1);
    T(0, 0) = -1.0;
    Eigen::VectorXcd x0(1);
    x0(0) = 1.0;
    const auto r = fixed_space_projection(OperatorOrbitModel::make(T, x0, OrbitClass::unitary), 1000);
    CHECK(r.fixed_dim == 0);
    CHECK(r.chi_norm == 0.0);
    CHECK(r.residuals.back() <= 1.0 / 1000 + 1e-15);
  }
  SUBCASE("random unitary with a fixed space") {
    CounterRng rng(9);
    for (int i = 0; i < 20; ++i) {
      const int d = 2 + static_cast<int>(rng.uniform_int(0, 14));
      const int fixed = 1 + static_cast<int>(rng.uniform_int(0, d - 2));
      const auto orbit = random_unitary_with_fixed_space(rng, d, fixed, 0.2);
      const auto r = fixed_space_projection(orbit, 512);
      CHECK(r.fixed_dim == fixed);
      CHECK(r.riesz_angle <= 1e-9);
      CHECK(r.rate_bound_holds);
    }
  }
  SUBCASE("non-unitary T is rejected") {
    Eigen::MatrixXcd T = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
    CHECK_THROWS_AS(
        (void)fixed_space_projection(OperatorOrbitModel::make(T, Eigen::VectorXcd::Ones(2), OrbitClass::contraction), 8),
        std::invalid_argument);
  }
}

TEST_CASE("density limits") {
  auto r = density_limit(
      [](std::int64_t k) {
        const auto s = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(k))));
        return s * s == k ? 1.0 : 0.0;
      },
      10000, 0.05);
  CHECK(r.cesaro_mean == doctest::Approx(0.01));
  CHECK(r.density_of_small_set == doctest::Approx(0.99));
  CHECK(r.consistent_with_zero);

  r = density_limit([](std::int64_t) { return 1.0; }, 1000, 0.05);
  CHECK(r.cesaro_mean == 1.0);
  CHECK_FALSE(r.consistent_with_zero);

  r = density_limit([](std::int64_t k) { return 1.0 / static_cast<double>(k); }, 10000, 0.05);
  double harmonic = 0.0;
  for (int k = 1; k <= 10000; ++k) harmonic += 1.0 / k;
  CHECK(r.cesaro_mean == doctest::Approx(harmonic / 10000));
  CHECK(r.consistent_with_zero);

  r = density_limit([](std::int64_t k) { return static_cast<double>(k); }, 100, 0.05);
  CHECK_FALSE(r.bounded_reliable);
}
