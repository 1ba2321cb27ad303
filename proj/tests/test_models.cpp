#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kyfan/models.hpp"
#include "kyfan/sampling.hpp"
#include "kyfan/sums.hpp"
#include "oracles.hpp"

using namespace kyfan;
using std::numbers::pi;

TEST_CASE("covariance families") {
  CHECK(CovarianceModel::orthonormal().gamma(0) == cplx(1.0));
  CHECK(CovarianceModel::orthonormal().gamma(5) == cplx(0.0));
  CHECK(CovarianceModel::constant().gamma(-7) == cplx(1.0));
  CHECK(CovarianceModel::ar1(0.5).gamma(3).real() == doctest::Approx(0.125));
  CHECK(CovarianceModel::ar1(0.5).gamma(-3).real() == doctest::Approx(0.125));
  CHECK(CovarianceModel::cosine(0.3).gamma(4).real() == doctest::Approx(std::cos(1.2)));
}

TEST_CASE("table model is Hermitian and bounded by its horizon") {
  const auto m = CovarianceModel::from_table({1.0, cplx(0.2, 0.1)}, 5);
  CHECK(m.gamma(1) == cplx(0.2, 0.1));
  CHECK(m.gamma(-1) == cplx(0.2, -0.1));
  CHECK(m.gamma(4) == cplx(0.0));
  CHECK_THROWS_AS((void)m.gamma(6), HorizonError);
}

TEST_CASE("malformed models name the field") {
  auto field_of = [](auto&& make) {
    try {
      make();
    } catch (const ModelError& e) {
      return e.field();
    }
    return std::string("none");
  };
  CHECK(field_of([] { (void)CovarianceModel::ar1(1.0); }) == "/rho");
  CHECK(field_of([] { (void)SpectralAtomsModel::from_atoms({{0.1, 1.0}, {0.2, -1.0}}); }) == "/atoms/1/weight");
  CHECK(field_of([] { (void)SpectralAtomsModel::from_atoms({{0.5, 1.0}, {0.5 + 2 * pi, 1.0}}); }) ==
        "/atoms/1/theta");
  CHECK(field_of([] {
          (void)OperatorOrbitModel::make(Eigen::MatrixXcd::Identity(2, 3), Eigen::VectorXcd::Ones(2),
                                         OrbitClass::unitary);
        }) == "/T");
}

TEST_CASE("angles normalize to (-pi, pi]") {
  CHECK(normalize_angle(-pi) == doctest::Approx(pi));
  CHECK(normalize_angle(3 * pi) == doctest::Approx(pi));
  CHECK(normalize_angle(2 * pi) == doctest::Approx(0.0));
  CHECK(normalize_angle(-0.25) == doctest::Approx(-0.25));
}

TEST_CASE("validate") {
  SUBCASE("ar1(0.5) window 64 is PSD with positive minimum eigenvalue") {
    const auto r = validate(CovarianceModel::ar1(0.5), 64);
    CHECK(r.pass);
    CHECK(r.min_eigenvalue > 0.0);
    // Independent oracle: the AR(1) Toeplitz spectrum is bounded below by (1-rho)/(1+rho).
    CHECK(r.min_eigenvalue >= (1 - 0.5) / (1 + 0.5) - 1e-12);
  }
  SUBCASE("constant window 8 has minimum eigenvalue 0") {
    const auto r = validate(CovarianceModel::constant(), 8);
    CHECK(r.pass);
    CHECK(std::abs(r.min_eigenvalue) < 1e-12);
  }
  SUBCASE("table 1, 0.9, 0.9 is PSD through window 3 and fails at window 4") {
    const auto r = validate(CovarianceModel::from_real_table({1.0, 0.9, 0.9}, 10), 10);
    CHECK_FALSE(r.pass);
    CHECK(r.first_failing_window == 4);
    Eigen::Matrix3d G3;
    G3 << 1, 0.9, 0.9, 0.9, 1, 0.9, 0.9, 0.9, 1;  // eigenvalues 2.8, 0.1, 0.1
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(G3).eigenvalues().minCoeff() == doctest::Approx(0.1));
    Eigen::Matrix4d G4;
    G4 << 1, 0.9, 0.9, 0, 0.9, 1, 0.9, 0.9, 0.9, 0.9, 1, 0.9, 0, 0.9, 0.9, 1;
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(G4).eigenvalues().minCoeff() < -0.4);
  }
  SUBCASE("non-unitary orbit declared unitary fails") {
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Identity(2, 2) * 0.5;
    const auto r = validate(OperatorOrbitModel::make(T, Eigen::VectorXcd::Ones(2), OrbitClass::unitary), 4);
    CHECK_FALSE(r.pass);
  }
  SUBCASE("random spectral models always validate") {
    CounterRng rng(11);
    for (int i = 0; i < 50; ++i) CHECK(validate(random_spectral(rng, 8), 32).pass);
  }
}
