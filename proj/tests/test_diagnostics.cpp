#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "kyfan/diagnostics.hpp"
#include "kyfan/sampling.hpp"
#include "oracles.hpp"

using namespace kyfan;
using std::numbers::pi;

TEST_CASE("index sequences") {
  CHECK(IndexSequence::parse("arithmetic:3").at(4) == 12);
  CHECK(IndexSequence::parse("geometric:2").at(5) == 32);
  CHECK(IndexSequence::parse("squares").at(7) == 49);
  const auto list = IndexSequence::parse("list:1,2,5");
  CHECK(list.at(3) == 5);
  CHECK(list.size() == 3);
  CHECK_THROWS_AS((void)list.at(4), std::out_of_range);
  CHECK_THROWS((void)IndexSequence::parse("list:3,2"));
  CHECK_THROWS_AS((void)IndexSequence::geometric(2).at(64), std::out_of_range);

  const char* path = "diag_seq_test.txt";
  {
    std::ofstream f(path);
    f << "2 3\n10\n";
  }
  const auto from_file = IndexSequence::parse(std::string("file:") + path);
  CHECK(from_file.at(3) == 10);
  std::remove(path);
}

TEST_CASE("chains") {
  const auto c = ChainSpec::geometric(2, 4);
  CHECK(c.D(1) == 2);
  CHECK(c.D(5) == 32);
  CHECK(c.depth() == 4);
  CHECK_THROWS((void)ChainSpec(3, {1}));
  CHECK_THROWS((void)ChainSpec::geometric(2, 80));
}

TEST_CASE("ratio statistic") {
  GramEngine ortho(CovarianceModel::orthonormal());
  // R = 1 exactly for orthonormal sequences.
  for (auto [a, b] : {std::pair<std::int64_t, std::int64_t>{1, 2}, {3, 10}, {50, 51}}) {
    CHECK(ratio_statistic(ortho, a, b) == doctest::Approx(1.0).epsilon(1e-12));
  }
  GramEngine constant(CovarianceModel::constant());
  CHECK(std::abs(ratio_statistic(constant, 3, 7)) < 1e-12);

  GramEngine quarter(SpectralAtomsModel::from_atoms({{pi / 2, 1.0}}));
  CHECK(ratio_statistic(quarter, 2, 4) == doctest::Approx(2.0));
}

TEST_CASE("ratio decomposition on random models") {
  CounterRng rng(17);
  for (int i = 0; i < 30; ++i) {
    GramEngine engine(i % 3 == 0 ? StationaryModel(random_ar1(rng))
                                 : i % 3 == 1 ? StationaryModel(random_spectral(rng, 8))
                                              : StationaryModel(random_unitary_orbit(rng, 6)));
    for (auto [a, b] : {std::pair<std::int64_t, std::int64_t>{1, 2}, {7, 30}, {500, 501}, {900, 2000}}) {
      const auto t = ratio_with_decomposition(engine, a, b);
      CHECK(t.residual <= t.tolerance);
      CHECK(t.ratio >= 0.0);
    }
  }
}

TEST_CASE("ratio sums") {
  GramEngine ortho(CovarianceModel::orthonormal());
  const auto r = ratio_sum(ortho, IndexSequence::geometric(2), 4, Normalization::by_nN);
  CHECK(r.normalized_sum == doctest::Approx(0.1875));
  CHECK(r.comparator == doctest::Approx(0.4375));
  CHECK(r.identity_holds);

  const auto c = ratio_sum(ortho, IndexSequence::geometric(2), 4, Normalization::by_count);
  CHECK(c.normalized_sum == doctest::Approx(1.0));
}

TEST_CASE("arithmetic identity") {
  GramEngine ortho(CovarianceModel::orthonormal());
  auto r = arithmetic_identity(ortho, 3, 5);
  CHECK(r.check.lhs == doctest::Approx(4.0 / 15));
  CHECK(r.check.rhs == doctest::Approx(1.0 / 3 - 1.0 / 15));
  CHECK(r.check.passed());
  CHECK(r.c_statistic_weighted == doctest::Approx(r.check.lhs));

  GramEngine constant(CovarianceModel::constant());
  r = arithmetic_identity(constant, 4, 6);
  CHECK(std::abs(r.check.lhs) < 1e-12);
  CHECK(std::abs(r.check.rhs) < 1e-12);

  GramEngine ar(CovarianceModel::ar1(0.5));
  r = arithmetic_identity(ar, 2, 8);
  CHECK(r.check.passed());
  CHECK(r.check.residual <= 1e-10);
}

TEST_CASE("literal arithmetic statistic against explicit vectors") {
  // (1/(Na)) sum_k ||k(S_{a(k+1)} - S_{ak}) - S_{ak}||^2 on orthonormal X:
  // each term is k^2 a + a k = a k (k + 1).
  GramEngine ortho(CovarianceModel::orthonormal());
  const std::int64_t a = 2, N = 6;
  const auto r = arithmetic_identity(ortho, a, N);
  double want = 0.0;
  for (std::int64_t k = 1; k < N; ++k) want += static_cast<double>(a * k * (k + 1));
  want /= static_cast<double>(N * a);
  CHECK(r.c_statistic == doctest::Approx(want));
  CHECK_FALSE(r.literal_matches_lhs);
}

TEST_CASE("chain series") {
  GramEngine quarter(SpectralAtomsModel::from_atoms({{pi / 2, 1.0}}));
  auto r = chain_series(quarter, ChainSpec::geometric(2, 20), 20);
  CHECK(std::abs(r.total - 0.5) < 1e-6);
  CHECK(r.residuals_ok);
  CHECK(r.partial_sums_nondecreasing);

  GramEngine constant(CovarianceModel::constant());
  r = chain_series(constant, ChainSpec(3, {2, 5, 3}), 3);
  for (double t : r.terms) CHECK(std::abs(t) < 1e-12);

  GramEngine two(SpectralAtomsModel::from_atoms({{0.0, 0.5}, {pi, 0.5}}));
  r = chain_series(two, ChainSpec::geometric(2, 10), 10);
  CHECK(std::abs(r.total) < 1e-12);
}

TEST_CASE("recentering") {
  const auto model = SpectralAtomsModel::from_atoms({{0.0, 2.0}, {1.0, 1.0}});
  const auto centered = std::get<SpectralAtomsModel>(recenter(model));
  CHECK(centered.atoms.size() == 1);
  CHECK(centered.atoms[0].theta == 1.0);
  CHECK_THROWS((void)recenter(CovarianceModel::ar1(0.3)));

  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(2, 2);
  T(0, 0) = 1.0;
  T(1, 1) = cplx(0, 1);
  Eigen::VectorXcd x0(2);
  x0 << 1.0, 1.0;
  const auto orbit = std::get<OperatorOrbitModel>(recenter(OperatorOrbitModel::make(T, x0, OrbitClass::unitary)));
  CHECK(std::abs(orbit.x0(0)) < 1e-12);
}

TEST_CASE("gap-divergent trend decreases") {
  const auto model = SpectralAtomsModel::from_atoms({{0.0, 0.5}, {pi, 1.0}, {2.0, 0.3}});
  const auto r = gap_divergent_trend(model, IndexSequence::squares(), 256);
  CHECK(r.nonincreasing);
  CHECK(r.points.back().value < r.points.front().value);
}
