#pragma once

// Product-state minimization of <A,B|W|A,B> by see-saw: with |A> fixed the
// optimal |B> is the lowest eigenvector of <A|W|A>, and vice versa. Each
// half step is an exact eigenproblem, so the objective never increases.

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "schmidtwit/hilbert.hpp"
#include "schmidtwit/random.hpp"

namespace schmidtwit {

struct OptimizerConfig {
  std::uint64_t seed = 1;
  int restarts = 64;
  int maxIters = 500;
  double convergenceTol = 1e-10;
  double positivityTol = 1e-7;
  double zeroTol = 1e-8;

  void validate() const {
    if (restarts < 1) throw ParameterError("restarts must be >= 1");
    if (maxIters < 1) throw ParameterError("maxIters must be >= 1");
    if (!(convergenceTol > 0.0) || !(positivityTol > 0.0) || !(zeroTol > 0.0)) {
      throw ParameterError("tolerances must be positive");
    }
  }

  friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

struct SeeSawRun {
  double value;
  PureState argA;
  PureState argB;
  int iterations;
  bool converged;
  // Objective after every half step.
  std::vector<double> history;
};

struct ProductMinResult {
  double value;
  PureState argA;
  PureState argB;
  int restartsUsed;
  bool converged;
  // Best value of every restart, in restart order.
  std::vector<double> trace;

  PureState product() const { return tensor(argA, argB); }
};

/// One see-saw descent from `startA` (a unit vector on the A factor).
inline SeeSawRun seeSaw(const Operator& w, const PureState& startA, const OptimizerConfig& config) {
  requireHermitian(w, "seeSaw");
  PureState a = startA.normalized();
  PureState b = PureState::basis(w.dims().factorB(), 0);
  std::vector<double> history;
  double value = std::numeric_limits<double>::infinity();
  bool converged = false;
  int it = 0;
  while (it < config.maxIters) {
    ++it;
    EigenPair toB = minEigenpair(partialExpectation(w, a, Side::A));
    b = std::move(toB.vector);
    history.push_back(toB.value);
    EigenPair toA = minEigenpair(partialExpectation(w, b, Side::B));
    a = std::move(toA.vector);
    history.push_back(toA.value);
    const double improvement = value - toA.value;
    value = toA.value;
    if (improvement < config.convergenceTol) {
      converged = true;
      break;
    }
  }
  return SeeSawRun{value, std::move(a), std::move(b), it, converged, std::move(history)};
}

/// Best see-saw value over `config.restarts` seeded random starts. Restart r
/// draws its start from makeEngine(config.seed, Stream::SeeSaw, r), so the
/// result does not depend on evaluation order.
inline ProductMinResult minProductExpectation(const Operator& w, const OptimizerConfig& config) {
  config.validate();
  requireHermitian(w, "minProductExpectation");
  const Dims fa = w.dims().factorA();
  std::vector<double> trace;
  trace.reserve(config.restarts);
  std::optional<SeeSawRun> best;
  for (int r = 0; r < config.restarts; ++r) {
    auto rng = makeEngine(config.seed, Stream::SeeSaw, static_cast<std::uint64_t>(r));
    SeeSawRun run = seeSaw(w, PureState(fa, randomUnitVector(fa.total(), rng)), config);
    trace.push_back(run.value);
    if (!best || run.value < best->value) best = std::move(run);
  }
  return ProductMinResult{best->value, std::move(best->argA), std::move(best->argB),
                          config.restarts, best->converged, std::move(trace)};
}

}  // namespace schmidtwit
