#include "kyfan/sampling.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace kyfan {

std::uint64_t CounterRng::mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1) + 0xD1B54A32D192ED03ULL * stream;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::int64_t CounterRng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next() % span);
}

double CounterRng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SpectralAtomsModel random_spectral(CounterRng& rng, int max_atoms) {
  const auto count = rng.uniform_int(1, max_atoms);
  std::vector<SpectralAtom> atoms;
  while (static_cast<std::int64_t>(atoms.size()) < count) {
    const double theta = normalize_angle(rng.uniform(-std::numbers::pi, std::numbers::pi));
    bool fresh = true;
    for (const auto& a : atoms) fresh = fresh && std::abs(a.theta - theta) > 1e-9;
    if (fresh) atoms.push_back({theta, rng.uniform(0.05, 1.0)});
  }
  return SpectralAtomsModel::from_atoms(std::move(atoms));
}

CovarianceModel random_ar1(CounterRng& rng) { return CovarianceModel::ar1(rng.uniform(-0.95, 0.95)); }

CovarianceModel random_cosine(CounterRng& rng) {
  return CovarianceModel::cosine(rng.uniform(-std::numbers::pi, std::numbers::pi));
}

namespace {

Eigen::MatrixXcd ginibre(CounterRng& rng, int dim) {
  Eigen::MatrixXcd G(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) G(i, j) = cplx(rng.normal(), rng.normal());
  }
  return G;
}

Eigen::VectorXcd random_unit_vector(CounterRng& rng, int dim) {
  Eigen::VectorXcd x(dim);
  for (int i = 0; i < dim; ++i) x(i) = cplx(rng.normal(), rng.normal());
  return x / x.norm();
}

}  // namespace

Eigen::MatrixXcd random_unitary(CounterRng& rng, int dim) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre(rng, dim));
  Eigen::MatrixXcd Q = qr.householderQ();
  const Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(R(j, j));
    if (mag > 0.0) Q.col(j) *= R(j, j) / mag;
  }
  return Q;
}

OperatorOrbitModel random_unitary_orbit(CounterRng& rng, int max_dim) {
  const int dim = static_cast<int>(rng.uniform_int(1, max_dim));
  Eigen::MatrixXcd T = random_unitary(rng, dim);
  return OperatorOrbitModel::make(std::move(T), random_unit_vector(rng, dim), OrbitClass::unitary);
}

OperatorOrbitModel random_unitary_with_fixed_space(CounterRng& rng, int dim, int fixed_dims,
                                                   double min_gap) {
  const Eigen::MatrixXcd Q = random_unitary(rng, dim);
  Eigen::VectorXcd phases(dim);
  for (int j = 0; j < dim; ++j) {
    if (j < fixed_dims) {
      phases(j) = 1.0;
    } else {
      const double mag = rng.uniform(min_gap, std::numbers::pi);
      phases(j) = std::polar(1.0, rng.uniform() < 0.5 ? -mag : mag);
    }
  }
  Eigen::MatrixXcd T = Q * phases.asDiagonal() * Q.adjoint();
  return OperatorOrbitModel::make(std::move(T), random_unit_vector(rng, dim), OrbitClass::unitary);
}

OperatorOrbitModel random_contraction_orbit(CounterRng& rng, int max_dim) {
  const int dim = static_cast<int>(rng.uniform_int(1, max_dim));
  Eigen::MatrixXcd G = ginibre(rng, dim);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
  const double target = rng.uniform(0.2, 1.0);
  G *= target / svd.singularValues()(0);
  return OperatorOrbitModel::make(std::move(G), random_unit_vector(rng, dim), OrbitClass::contraction);
}

OperatorOrbitModel diagonal_unitary(const SpectralAtomsModel& spectral) {
  const auto d = static_cast<Eigen::Index>(spectral.atoms.size());
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(d, d);
  Eigen::VectorXcd x0(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto& a = spectral.atoms[static_cast<std::size_t>(j)];
    T(j, j) = unit_phase(1.0, a.theta);
    x0(j) = std::sqrt(a.weight);
  }
  return OperatorOrbitModel::make(std::move(T), std::move(x0), OrbitClass::unitary);
}

}  // namespace kyfan
