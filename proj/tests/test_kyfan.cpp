#include <doctest.h>

#include <cmath>

#include "kyfan/checks.hpp"
#include "kyfan/sampling.hpp"
#include "oracles.hpp"

using namespace kyfan;

TEST_CASE("identity hand values") {
  GramEngine ortho(CovarianceModel::orthonormal());
  auto r = kyfan_identity(ortho, 1, 1);
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.rhs == doctest::Approx(1.0));
  CHECK(r.verdict == Verdict::identity_pass);

  GramEngine constant(CovarianceModel::constant());
  r = kyfan_identity(constant, 4, 9);
  CHECK(std::abs(r.lhs) < 1e-12);
  CHECK(std::abs(r.rhs) < 1e-12);

  GramEngine ar(CovarianceModel::ar1(0.5));
  r = kyfan_identity(ar, 1, 2);
  CHECK(std::abs(r.lhs - 2.0 / 3.0) <= 1e-12);
  CHECK(std::abs(r.rhs - 2.0 / 3.0) <= 1e-12);
}

TEST_CASE("ar1 identity sides from the explicit Gram expansion") {
  // Gram matrix of X_1..X_3 for rho = 0.5: entries 0.5^|j-k|.
  const auto g = [](std::int64_t h) { return oracle::lcplx(std::pow(0.5L, static_cast<long double>(h)), 0); };
  const long double s1 = oracle::sum_norm_sq(g, 1), s2 = oracle::sum_norm_sq(g, 2), s3 = oracle::sum_norm_sq(g, 3);
  const long double lhs = s1 / 1 + s2 / 2 - s3 / 3;
  const long double diff = s1 + s3 / 9 - 2 * oracle::cross(g, 1, 2).real() / 3;
  const long double rhs = (1.0L * 3 / 2) * diff;
  CHECK(std::abs(lhs - 2.0L / 3) < 1e-15);
  CHECK(std::abs(rhs - 2.0L / 3) < 1e-15);
}

TEST_CASE("contraction orbits satisfy the inequality") {
  Eigen::MatrixXcd T(1, 1);
  T(0, 0) = 0.5;
  Eigen::VectorXcd x0(1);
  x0(0) = 1.0;
  GramEngine engine(OperatorOrbitModel::make(T, x0, OrbitClass::contraction));
  const auto r = kyfan_inequality(engine, 1, 1);
  CHECK(r.lhs == doctest::Approx(0.03125));
  CHECK(r.rhs == doctest::Approx(0.21875));
  CHECK(r.verdict == Verdict::inequality_pass);
  CHECK_THROWS_AS((void)kyfan_identity(engine, 1, 1), NotStationaryError);
}

TEST_CASE("orthonormal inequality is an equality") {
  GramEngine ortho(CovarianceModel::orthonormal());
  const auto r = kyfan_inequality(ortho, 2, 3);
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.rhs == doctest::Approx(1.0));
  CHECK(r.passed());
}

TEST_CASE("increment condition violations are reported, not failed") {
  // An expanding scalar orbit breaks ||S_{n+m} - S_n|| <= ||S_m||.
  Eigen::MatrixXcd T(1, 1);
  T(0, 0) = 1.5;
  Eigen::VectorXcd x0(1);
  x0(0) = 1.0;
  GramEngine engine(OperatorOrbitModel::make(T, x0, OrbitClass::contraction));
  CHECK(kyfan_inequality(engine, 2, 1).verdict == Verdict::precondition_violation);
}

TEST_CASE("lemma1 hand values") {
  GramEngine ortho(CovarianceModel::orthonormal());
  auto r = lemma1_inequality(ortho, NormingSequence::power(0.5), 1, 1);
  CHECK(r.lhs == doctest::Approx(2 * std::sqrt(2.0) - 2));
  CHECK(r.rhs == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.passed());

  GramEngine constant(CovarianceModel::constant());
  r = lemma1_inequality(constant, NormingSequence::power(0.0), 1, 1);
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.rhs == doctest::Approx(2.0));
  CHECK(r.passed());
}

TEST_CASE("lemma1 with delta = 1 reproduces the identity") {
  CounterRng rng(21);
  for (int i = 0; i < 20; ++i) {
    GramEngine engine(random_spectral(rng, 6));
    for (std::int64_t n : {1, 5, 40}) {
      for (std::int64_t m : {1, 3, 77}) {
        const auto a = lemma1_inequality(engine, NormingSequence::power(1.0), n, m);
        const auto b = kyfan_identity(engine, n, m);
        CHECK(std::abs(a.lhs - a.rhs) <= 1e-10 * std::max(1.0, a.rhs));
        CHECK(a.lhs == doctest::Approx(b.rhs).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("lemma1 against an independent evaluation on explicit vectors") {
  const std::vector<oracle::Atom> atoms{{0.4L, 0.7L}, {-2.0L, 0.3L}, {3.0L, 1.1L}};
  std::vector<SpectralAtom> lib;
  for (const auto& a : atoms) lib.push_back({static_cast<double>(a.theta), static_cast<double>(a.weight)});
  GramEngine engine(SpectralAtomsModel::from_atoms(lib));
  const double delta = 0.75;
  for (std::int64_t n : {2, 9}) {
    for (std::int64_t m : {1, 6}) {
      const long double an = std::pow(static_cast<long double>(n), delta);
      const long double am = std::pow(static_cast<long double>(m), delta);
      const long double anm = std::pow(static_cast<long double>(n + m), delta);
      const auto sn = oracle::spectral_sum(atoms, n), sm = oracle::spectral_sum(atoms, m),
                 snm = oracle::spectral_sum(atoms, n + m);
      const long double lhs = an * anm / am * oracle::norm_sq(oracle::axpy(1 / an, sn, -1 / anm, snm));
      const long double rhs = oracle::norm_sq(sn) / an + oracle::norm_sq(sm) / am -
                              oracle::norm_sq(snm) / anm * (anm - an) / am;
      const auto r = lemma1_inequality(engine, NormingSequence::power(delta), n, m);
      CHECK(oracle::rel_err(r.lhs, lhs) < 1e-10);
      CHECK(oracle::rel_err(r.rhs, rhs) < 1e-10);
    }
  }
}

TEST_CASE("superadditivity hand values") {
  GramEngine constant(CovarianceModel::constant());
  auto r = superadditivity_check(constant, 2, 3);
  CHECK(r.lhs == doctest::Approx(5.0));
  CHECK(r.rhs == doctest::Approx(5.0));
  CHECK(r.passed());

  GramEngine ar(CovarianceModel::ar1(0.5));
  r = superadditivity_check(ar, 1, 2);
  CHECK(r.lhs == doctest::Approx(5.5 / 3));
  CHECK(r.rhs == doctest::Approx(2.5));
}

TEST_CASE("norming sequences") {
  CHECK(NormingSequence::power(0.5)(4) == doctest::Approx(2.0));
  CHECK(NormingSequence::linear()(7) == 7.0);
  CHECK_THROWS((void)NormingSequence::power(1.5));
  const auto bad = NormingSequence::table({1.0, 3.0});
  CHECK_FALSE(bad.subadditive_at(1, 1, {}));
  GramEngine ortho(CovarianceModel::orthonormal());
  CHECK(lemma1_inequality(ortho, bad, 1, 1).verdict == Verdict::precondition_violation);
}

TEST_CASE("check names") {
  CHECK(parse_check_name("kyfan.superadd") == NamedCheck::superadd);
  CHECK(std::string(to_string(NamedCheck::lemma1)) == "kyfan.lemma1");
  CHECK_THROWS((void)parse_check_name("kyfan.nope"));
}

TEST_CASE("scan") {
  SUBCASE("identity on ar1(0.5), exhaustive 64 x 64") {
    ScanOptions o;
    o.check = NamedCheck::identity;
    const auto r = scan(CovarianceModel::ar1(0.5), o);
    CHECK(r.cells == 64 * 64);
    CHECK(r.failures == 0);
    CHECK(r.worst_residual <= 1e-10);
  }
  SUBCASE("worker count does not change the aggregate") {
    ScanOptions o;
    o.check = NamedCheck::lemma1;
    o.alpha = NormingSequence::power(0.25);
    o.samples = 400;
    o.seed = 42;
    o.n_max = o.m_max = 300;
    CounterRng rng(4);
    const auto model = random_spectral(rng, 8);
    const auto one = scan(model, o);
    o.workers = 4;
    const auto four = scan(model, o);
    CHECK(one.worst_residual == four.worst_residual);
    CHECK(one.mean_residual == four.mean_residual);
    CHECK(one.worst_n == four.worst_n);
    CHECK(one.failures == 0);
  }
  SUBCASE("lemma1 on orthonormal for every delta") {
    for (double delta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      ScanOptions o;
      o.check = NamedCheck::lemma1;
      o.alpha = NormingSequence::power(delta);
      o.n_max = o.m_max = 128;
      CHECK(scan(CovarianceModel::orthonormal(), o).failures == 0);
    }
  }
  SUBCASE("per-cell errors are collected") {
    ScanOptions o;
    o.n_max = o.m_max = 8;
    const auto r = scan(CovarianceModel::from_real_table({1.0, 0.2}, 10), o);
    CHECK(r.errors > 0);
    CHECK_FALSE(r.error_messages.empty());
  }
}
