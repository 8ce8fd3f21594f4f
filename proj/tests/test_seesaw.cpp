#include <catch_amalgamated.hpp>

#include <cmath>

#include "schmidtwit/embedding.hpp"
#include "schmidtwit/families.hpp"
#include "schmidtwit/grid_oracle.hpp"
#include "schmidtwit/seesaw.hpp"
#include "support/oracles.hpp"

using namespace schmidtwit;
using Catch::Matchers::WithinAbs;

namespace {

Operator bellWitness() {
  const double r = 1.0 / std::sqrt(2.0);
  CVector phi = CVector::Zero(4);
  phi(0) = r;
  phi(3) = r;
  const CMatrix m = (CMatrix::Identity(4, 4) - 2.0 * phi * phi.adjoint()) / 2.0;
  return Operator(bipartite(2, 2), m);
}

OptimizerConfig quick(int restarts = 16) {
  OptimizerConfig c;
  c.restarts = restarts;
  return c;
}

}  // namespace

TEST_CASE("product minimum of the normalized identity") {
  for (const Dims d : {bipartite(2, 2), bipartite(3, 3), Dims{3, 3, 2, 2}}) {
    const Operator w = Operator::identity(d, 1.0 / d.total());
    const ProductMinResult r = minProductExpectation(w, quick(4));
    CHECK_THAT(r.value, WithinAbs(1.0 / d.total(), 1e-14));
  }
}

TEST_CASE("product minimum of the two-qubit Bell witness is zero") {
  const Operator w = bellWitness();
  const ProductMinResult r = minProductExpectation(w, OptimizerConfig{});
  CHECK_THAT(r.value, WithinAbs(0.0, 1e-9));
  const double grid = oracle::twoQubitGridMin(w.matrix(), 24);
  CHECK_THAT(r.value, WithinAbs(grid, 1e-4));
  CHECK_THAT(gridProductMin(w), WithinAbs(0.0, 1e-8));
}

TEST_CASE("product minimum of the isotropic witness at a = 1/3 is zero") {
  const ProductMinResult r = minProductExpectation(makeIsotropicWitness({1.0 / 3.0, 3}), OptimizerConfig{});
  CHECK_THAT(r.value, WithinAbs(0.0, 1e-6));
}

TEST_CASE("result is consistent with its arguments and dominates the spectrum") {
  for (int t = 0; t < 20; ++t) {
    const Operator w = randomHermitian(t % 2 ? bipartite(3, 3) : bipartite(2, 4), 500 + t);
    const ProductMinResult r = minProductExpectation(w, quick());
    REQUIRE_THAT(expectation(w, r.product()), WithinAbs(r.value, 1e-9));
    REQUIRE(r.value >= minEigenvalue(w) - 1e-9);
    REQUIRE(r.trace.size() == 16);
    REQUIRE(r.restartsUsed == 16);
    REQUIRE(*std::min_element(r.trace.begin(), r.trace.end()) == r.value);
    REQUIRE_THAT(r.argA.squaredNorm(), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(r.argB.squaredNorm(), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("see-saw objective never increases") {
  const OptimizerConfig c = quick();
  for (int t = 0; t < 30; ++t) {
    const Operator w = t < 15 ? randomHermitian(bipartite(3, 3), 600 + t)
                              : liftOperator(makeIsotropicWitness({0.1 + 0.01 * t, 3}), 2).op;
    auto rng = makeEngine(t, Stream::Fixture, 40);
    const Dims fa = w.dims().factorA();
    const SeeSawRun run = seeSaw(w, PureState(fa, randomUnitVector(fa.total(), rng)), c);
    REQUIRE(run.history.size() == static_cast<size_t>(2 * run.iterations));
    for (size_t i = 1; i < run.history.size(); ++i) {
      REQUIRE(run.history[i] <= run.history[i - 1] + 1e-13);
    }
    REQUIRE(run.value == run.history.back());
  }
}

TEST_CASE("see-saw agrees with the grid oracle on qubit-qutrit operators") {
  for (int t = 0; t < 5; ++t) {
    const Operator w = randomHermitian(t % 2 ? bipartite(2, 2) : bipartite(2, 3), 700 + t);
    const double seesaw = minProductExpectation(w, OptimizerConfig{}).value;
    CHECK_THAT(seesaw, WithinAbs(gridProductMin(w), 1e-4));
    if (w.dims() == bipartite(2, 2)) CHECK_THAT(seesaw, WithinAbs(oracle::twoQubitGridMin(w.matrix(), 24), 5e-3));
  }
}

TEST_CASE("product minimization is deterministic for a fixed seed") {
  const Operator w = liftOperator(makeIsotropicWitness({0.125, 3}), 3).op;
  const ProductMinResult r1 = minProductExpectation(w, quick(8));
  const ProductMinResult r2 = minProductExpectation(w, quick(8));
  CHECK(r1.value == r2.value);
  CHECK(r1.trace == r2.trace);
  CHECK(r1.argA.amplitudes() == r2.argA.amplitudes());
  OptimizerConfig other = quick(8);
  other.seed = 99;
  CHECK(minProductExpectation(w, other).trace != r1.trace);
}

TEST_CASE("product minimization errors") {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(minProductExpectation(Operator(bipartite(2, 2), m), quick()), NotHermitianError);
  OptimizerConfig zero = quick();
  zero.restarts = 0;
  CHECK_THROWS_AS(minProductExpectation(bellWitness(), zero), ParameterError);
  OptimizerConfig badTol = quick();
  badTol.convergenceTol = 0.0;
  CHECK_THROWS_AS(badTol.validate(), ParameterError);
}

TEST_CASE("engines are keyed by seed, stream and index") {
  auto a = makeEngine(1, Stream::SeeSaw, 0);
  auto b = makeEngine(1, Stream::SeeSaw, 0);
  auto c = makeEngine(1, Stream::SeeSaw, 1);
  auto d = makeEngine(1, Stream::Sampling, 0);
  const auto va = a();
  CHECK(va == b());
  CHECK(va != c());
  CHECK(va != d());
}
