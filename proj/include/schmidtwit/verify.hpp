#pragma once

// Seeded property suites behind `schmidtwit verify`. Each trial reports one
// error value; a suite passes when every error is below its tolerance.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "schmidtwit/embedding.hpp"
#include "schmidtwit/families.hpp"
#include "schmidtwit/grid_oracle.hpp"
#include "schmidtwit/seesaw.hpp"

namespace schmidtwit {

struct SuiteResult {
  std::string suite;
  int trials = 0;
  double tolerance = 0.0;
  double maxError = 0.0;
  bool passed = false;
  std::vector<double> errors;
};

struct SuiteOptions {
  int trials = 0;  // 0 selects the suite default
  std::uint64_t seed = 1;
  Dims dims = bipartite(3, 3);
  OptimizerConfig config;
};

inline const std::vector<std::string>& suiteNames() {
  static const std::vector<std::string> names{"identities", "roundtrip", "trace", "lemma5", "oracle"};
  return names;
}

namespace detail {

inline SuiteResult finish(std::string name, double tol, std::vector<double> errors) {
  SuiteResult r;
  r.suite = std::move(name);
  r.trials = static_cast<int>(errors.size());
  r.tolerance = tol;
  for (double e : errors) r.maxError = std::max(r.maxError, e);
  r.passed = r.maxError < tol;
  r.errors = std::move(errors);
  return r;
}

inline int uniformInt(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline PureState randomFactor(const Dims& d, std::mt19937_64& rng) {
  return PureState(d, randomUnitVector(d.total(), rng), true);
}

}  // namespace detail

/// <psi|S|psi> against <I_k(psi)|S_k|I_k(psi)>, with k in {2, 3} and Schmidt
/// ranks up to min(dA, dB), so rank > k block lifts are covered.
inline SuiteResult runIdentitiesSuite(const SuiteOptions& opt) {
  const int trials = opt.trials > 0 ? opt.trials : 500;
  auto rng = makeEngine(opt.seed, Stream::Sampling, 101);
  const int maxRank = std::min(opt.dims.dA, opt.dims.dB);
  std::vector<double> errors;
  for (int t = 0; t < trials; ++t) {
    const int k = 2 + t % 2;
    const Operator s = randomHermitian(opt.dims, rng());
    const PureState psi = randomStateWithRank(opt.dims, detail::uniformInt(rng, 1, maxRank), rng);
    const double lhs = expectation(s, psi);
    const double rhs = expectation(liftOperator(s, k).op, liftState(psi, k).state);
    errors.push_back(std::abs(lhs - rhs));
  }
  return detail::finish("identities", 1e-9, std::move(errors));
}

/// ||J_k(I_k(psi)) - psi|| for Schmidt rank <= k.
inline SuiteResult runRoundtripSuite(const SuiteOptions& opt) {
  const int trials = opt.trials > 0 ? opt.trials : 500;
  auto rng = makeEngine(opt.seed, Stream::Sampling, 102);
  const int maxRank = std::min(opt.dims.dA, opt.dims.dB);
  std::vector<double> errors;
  for (int t = 0; t < trials; ++t) {
    const int k = 1 + t % maxRank;
    const PureState psi = randomStateWithRank(opt.dims, detail::uniformInt(rng, 1, k), rng);
    const PureState back = lowerState(liftState(psi, k).state, k);
    errors.push_back((back.amplitudes() - psi.amplitudes()).norm());
  }
  return detail::finish("roundtrip", 1e-10, std::move(errors));
}

/// Tr(S rho) = Tr(S_k Gamma_k) for a random decomposition of rho, and
/// Tr(S_k Theta) = Tr(S theta) for a random enlarged ensemble Theta.
inline SuiteResult runTraceSuite(const SuiteOptions& opt) {
  const int trials = opt.trials > 0 ? opt.trials : 200;
  auto rng = makeEngine(opt.seed, Stream::Sampling, 103);
  const int maxRank = std::min(opt.dims.dA, opt.dims.dB);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::vector<double> errors;
  for (int t = 0; t < trials; ++t) {
    const int k = 2 + t % 2;
    const Operator s = randomHermitian(opt.dims, rng());
    const Operator lifted = liftOperator(s, k).op;

    Ensemble down;
    const int members = detail::uniformInt(rng, 1, 4);
    for (int i = 0; i < members; ++i) {
      down.push_back({weight(rng), randomStateWithRank(opt.dims, detail::uniformInt(rng, 1, maxRank), rng)});
    }
    const double e1 = std::abs(tracePair(s, mixture(down)) - tracePair(lifted, liftEnsemble(down, k)));

    Ensemble up;
    const Dims big = opt.dims.withAncilla(k);
    for (int i = 0; i < members; ++i) {
      up.push_back({weight(rng), PureState(big, randomUnitVector(big.total(), rng), true)});
    }
    const double e2 = std::abs(tracePair(lifted, mixture(up)) - tracePair(s, lowerEnsemble(up, k)));
    errors.push_back(std::max(e1, e2));
  }
  return detail::finish("trace", 1e-9, std::move(errors));
}

/// <A1 B1|S_k|A2 B2> = <J_k(A1 B1)|S|J_k(A2 B2)> on random product pairs.
inline SuiteResult runMatrixElementSuite(const SuiteOptions& opt) {
  const int trials = opt.trials > 0 ? opt.trials : 200;
  auto rng = makeEngine(opt.seed, Stream::Sampling, 104);
  std::vector<double> errors;
  for (int t = 0; t < trials; ++t) {
    const int k = 2 + t % 2;
    const Operator s = randomHermitian(opt.dims, rng());
    const Operator lifted = liftOperator(s, k).op;
    const Dims big = opt.dims.withAncilla(k);
    const PureState a1 = detail::randomFactor(big.factorA(), rng);
    const PureState b1 = detail::randomFactor(big.factorB(), rng);
    const PureState a2 = detail::randomFactor(big.factorA(), rng);
    const PureState b2 = detail::randomFactor(big.factorB(), rng);
    const Complex lhs = matrixElement(lifted, tensor(a1, b1), tensor(a2, b2));
    const Complex rhs = matrixElement(s, lowerProductState(a1, b1, k), lowerProductState(a2, b2, k));
    errors.push_back(std::abs(lhs - rhs));
  }
  return detail::finish("lemma5", 1e-9, std::move(errors));
}

/// See-saw product minimum against the Bloch-sphere grid oracle.
inline SuiteResult runOracleSuite(const SuiteOptions& opt) {
  const int trials = opt.trials > 0 ? opt.trials : 20;
  if (opt.dims.sideA() != 2) throw ParameterError("oracle suite needs dims 2xN");
  auto rng = makeEngine(opt.seed, Stream::Sampling, 105);
  std::vector<double> errors;
  for (int t = 0; t < trials; ++t) {
    const Operator w = randomHermitian(opt.dims, rng());
    const double seesaw = minProductExpectation(w, opt.config).value;
    errors.push_back(std::abs(seesaw - gridProductMin(w)));
  }
  return detail::finish("oracle", 1e-4, std::move(errors));
}

inline SuiteResult runSuite(const std::string& name, const SuiteOptions& opt) {
  if (name == "identities") return runIdentitiesSuite(opt);
  if (name == "roundtrip") return runRoundtripSuite(opt);
  if (name == "trace") return runTraceSuite(opt);
  if (name == "lemma5") return runMatrixElementSuite(opt);
  if (name == "oracle") return runOracleSuite(opt);
  throw ParameterError("unknown suite '" + name + "'");
}

}  // namespace schmidtwit
