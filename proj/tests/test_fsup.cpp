#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kyfan/fsup.hpp"
#include "kyfan/sampling.hpp"

using namespace kyfan;
using std::numbers::pi;

TEST_CASE("f^2 hand values") {
  GramEngine ortho(CovarianceModel::orthonormal());
  FSupTable t1(ortho);
  for (std::int64_t n = 1; n <= 20; ++n) CHECK(t1.f_sq(n) == doctest::Approx(1.0));

  GramEngine constant(CovarianceModel::constant());
  FSupTable t2(constant);
  for (std::int64_t n = 1; n <= 20; ++n) {
    CHECK(t2.f_sq(n) == doctest::Approx(static_cast<double>(n)));
    CHECK(t2.argmax(n) == n);
  }

  GramEngine quarter(SpectralAtomsModel::from_atoms({{pi / 2, 1.0}}));
  FSupTable t3(quarter);
  for (std::int64_t n = 1; n <= 4; ++n) CHECK(t3.f_sq(n) == doctest::Approx(1.0));
}

TEST_CASE("f^2 is nondecreasing and dominates s_n / n") {
  CounterRng rng(6);
  GramEngine engine(random_spectral(rng, 6));
  FSupTable t(engine);
  for (std::int64_t n = 2; n <= 300; ++n) {
    CHECK(t.f_sq(n) >= t.f_sq(n - 1));
    CHECK(t.f_sq(n) >= engine.sum_norm_sq(n) / static_cast<double>(n));
  }
}

TEST_CASE("subadditivity scans") {
  GramEngine constant(CovarianceModel::constant());
  auto r = subadditivity_scan(constant, 256);
  CHECK(r.failures == 0);
  CHECK(r.equality_cases == r.pairs);

  GramEngine ortho(CovarianceModel::orthonormal());
  r = subadditivity_scan(ortho, 64);
  CHECK(r.failures == 0);
  CHECK(r.worst_slack == doctest::Approx(1.0));

  CounterRng rng(42);
  for (int i = 0; i < 20; ++i) {
    GramEngine engine(random_spectral(rng, 8));
    CHECK(subadditivity_scan(engine, 256).failures == 0);
  }
}

TEST_CASE("I ratio hand values") {
  GramEngine ortho(CovarianceModel::orthonormal());
  FSupTable t1(ortho);
  auto r = prop_iratio(t1, 1, 1);
  CHECK(r.I == doctest::Approx(0.5));
  CHECK(r.stated_bound == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.sharp_bound == doctest::Approx(std::sqrt(0.5)));
  CHECK(r.condition_met);
  CHECK(r.stated_bound_holds);
  CHECK(r.sharp_bound_holds);

  GramEngine constant(CovarianceModel::constant());
  FSupTable t2(constant);
  r = prop_iratio(t2, 1, 3);
  CHECK(std::abs(r.I - std::sqrt(0.75)) <= 1e-12);
  CHECK(std::abs(r.I - r.sharp_bound) <= 1e-12);
  CHECK(r.stated_bound == doctest::Approx(std::sqrt(3.0)));
  CHECK(r.condition_met);
  for (std::int64_t x = 1; x <= 30; ++x) {
    r = prop_iratio(t2, x, x);
    CHECK(std::abs(r.I - std::sqrt(0.5)) <= 1e-12);
  }
}

TEST_CASE("I ratio is undefined for a vanishing model") {
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Identity(1, 1);
  GramEngine zero(OperatorOrbitModel::make(T, Eigen::VectorXcd::Zero(1), OrbitClass::unitary));
  FSupTable t(zero);
  CHECK_THROWS_AS((void)prop_iratio(t, 1, 1), UndefinedRatioError);
}

TEST_CASE("I ratio scan on random models") {
  CounterRng rng(77);
  for (int i = 0; i < 3; ++i) {
    GramEngine engine(random_spectral(rng, 8));
    const auto s = iratio_scan(engine, 60);
    CHECK(s.stated_violations == 0);
    CHECK(s.subadditivity_violations == 0);
  }
}
