#pragma once

// Seeded generators shared by the optimizer and the fixture constructors.
// Every random object is a pure function of (seed, stream, index).

#include <cstdint>
#include <random>

#include "schmidtwit/hilbert.hpp"

namespace schmidtwit {

// Stream tags keep independent consumers of one user seed decorrelated.
enum class Stream : std::uint32_t {
  SeeSaw = 1,
  PencilMin = 2,
  PencilSup = 3,
  Optimality = 4,
  Sampling = 5,
  Fixture = 6,
};

inline std::mt19937_64 makeEngine(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

/// Complex Gaussian vector (not normalized).
inline CVector gaussianVector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

inline CVector randomUnitVector(Eigen::Index n, std::mt19937_64& rng) {
  CVector v = gaussianVector(n, rng);
  return v / v.norm();
}

/// n x r matrix with orthonormal columns from the QR factor of a Gaussian matrix.
inline CMatrix randomIsometry(Eigen::Index n, Eigen::Index r, std::mt19937_64& rng) {
  CMatrix g(n, r);
  for (Eigen::Index c = 0; c < r; ++c) g.col(c) = gaussianVector(n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  return qr.householderQ() * CMatrix::Identity(n, r);
}

/// Unit state with exactly `rank` Schmidt terms across (A kA | B kB); the
/// coefficients are drawn from [0.2, 1] before normalization.
inline PureState randomStateWithRank(const Dims& dims, int rank, std::mt19937_64& rng) {
  dims.validate();
  if (rank < 1 || rank > std::min(dims.sideA(), dims.sideB())) {
    throw ParameterError("random state rank " + std::to_string(rank) + " impossible on " +
                         dims.str());
  }
  std::uniform_real_distribution<double> coeff(0.2, 1.0);
  RVector lambda(rank);
  for (int i = 0; i < rank; ++i) lambda(i) = coeff(rng);
  lambda /= lambda.norm();
  const CMatrix u = randomIsometry(dims.sideA(), rank, rng);
  const CMatrix v = randomIsometry(dims.sideB(), rank, rng);
  const CMatrix m = u * lambda.asDiagonal() * v.transpose();
  CVector amps(dims.total());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) amps(r * m.cols() + c) = m(r, c);
  }
  return PureState::normalize(dims, std::move(amps));
}

}  // namespace schmidtwit
