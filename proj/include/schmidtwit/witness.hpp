#pragma once

// Witness predicates and Schmidt-number classification.
//
// S is non-negative on every pure state of Schmidt rank <= l exactly when
// its lift S_l is non-negative on product states of the enlarged space,
// so every Schmidt-class positivity question here reduces to a product
// minimization (see seesaw.hpp) of a lifted operator.

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "schmidtwit/embedding.hpp"
#include "schmidtwit/hilbert.hpp"
#include "schmidtwit/random.hpp"
#include "schmidtwit/seesaw.hpp"

namespace schmidtwit {

// ---------------------------------------------------------------------------
// Entanglement witnesses

struct EntanglementWitnessVerdict {
  bool isWitness;
  bool traceNormalized;
  double productMin;
  double minEigenvalue;
  // Lowest eigenvector of W; detected whenever minEigenvalue < -tol.
  PureState detectedState;
  ProductMinResult evidence;
};

/// Non-negative on product states and negative on some state.
inline EntanglementWitnessVerdict isEntanglementWitness(const Operator& w,
                                                        const OptimizerConfig& config) {
  requireHermitian(w, "isEntanglementWitness");
  ProductMinResult pm = minProductExpectation(w, config);
  EigenPair ep = minEigenpair(w);
  const bool witness = pm.value >= -config.positivityTol && ep.value < -config.positivityTol;
  const bool normalized = std::abs(w.trace() - Complex(1.0)) < 1e-10;
  return EntanglementWitnessVerdict{witness, normalized, pm.value, ep.value, std::move(ep.vector),
                                    std::move(pm)};
}

// ---------------------------------------------------------------------------
// Schmidt-number classification

enum class Verdict {
  PositiveOperator,  // PSD: detects nothing
  SchmidtWitness,    // k-SW: non-negative on Schmidt rank k-1, detects rank k
  NotAWitness,       // negative on some product state
};

inline std::string verdictName(Verdict v, int k) {
  switch (v) {
    case Verdict::PositiveOperator:
      return "positive";
    case Verdict::SchmidtWitness:
      return std::to_string(k) + "-SW";
    case Verdict::NotAWitness:
      return "not-witness";
  }
  return "unknown";
}

struct LevelEvidence {
  double productMin;
  bool converged;
  int restarts;
};

struct WitnessClassification {
  Verdict verdict = Verdict::PositiveOperator;
  // Schmidt class detected for SchmidtWitness, 0 otherwise.
  int k = 0;
  // True when maxK stopped the search before a negative level was found.
  bool kIsLowerBound = false;
  double minEigenvalue = 0.0;
  std::map<int, double> perLevelProductMin;
  std::map<int, LevelEvidence> levels;
  // For SchmidtWitness(k): a unit state of Schmidt rank <= k with negative
  // expectation, lowered from the level-k product minimizer. For
  // NotAWitness: the offending product state.
  std::optional<PureState> detectedState;
  int detectedRank = 0;
  double detectedValue = 0.0;

  std::string name() const { return verdictName(verdict, k); }
};

/// k = 1 + max{l : product minimum of lift(S, l) >= -tol}. Levels are scanned
/// upward and the scan stops at the first negative level; larger levels
/// can only be more negative.
inline WitnessClassification classifySchmidtWitness(const Operator& s, int maxK,
                                                    const OptimizerConfig& config) {
  config.validate();
  requireHermitian(s, "classifySchmidtWitness");
  if (s.dims().hasAncilla()) throw DimensionError("classify expects an operator without ancilla");
  const int maxPossible = std::min(s.dims().dA, s.dims().dB);
  if (maxK == 0) maxK = maxPossible;
  if (maxK < 1 || maxK > maxPossible) {
    throw ParameterError("maxK = " + std::to_string(maxK) + " outside [1, " +
                         std::to_string(maxPossible) + "]");
  }
  const double tol = config.positivityTol;

  WitnessClassification out;
  out.minEigenvalue = minEigenvalue(s);
  if (out.minEigenvalue >= -tol) {
    out.verdict = Verdict::PositiveOperator;
    return out;
  }
  for (int l = 1; l <= maxK; ++l) {
    const ProductMinResult pm = minProductExpectation(liftOperator(s, l).op, config);
    out.perLevelProductMin[l] = pm.value;
    out.levels[l] = LevelEvidence{pm.value, pm.converged, pm.restartsUsed};
    if (pm.value >= -tol) continue;
    if (l == 1) {
      out.verdict = Verdict::NotAWitness;
      out.detectedState = pm.product().normalized();
    } else {
      out.verdict = Verdict::SchmidtWitness;
      out.k = l;
      PureState lowered = lowerProductState(pm.argA, pm.argB, l);
      if (lowered.squaredNorm() == 0.0) throw NumericalError("lowered minimizer vanished");
      out.detectedState = lowered.normalized();
    }
    out.detectedRank = schmidtRank(*out.detectedState);
    out.detectedValue = expectation(s, *out.detectedState);
    return out;
  }
  if (maxK == maxPossible) {
    throw NumericalError("no negative product value found at level " + std::to_string(maxK) +
                         " although the minimum eigenvalue is " +
                         std::to_string(out.minEigenvalue));
  }
  out.verdict = Verdict::SchmidtWitness;
  out.k = maxK + 1;
  out.kIsLowerBound = true;
  return out;
}

/// Tr(W rho) < -tol.
inline bool detects(const Operator& w, const Operator& rho, double tol) {
  if (!(w.dims() == rho.dims())) throw DimensionError("detects: dims mismatch");
  if (minEigenvalue(rho) < -tol) throw PreconditionError("detects: rho is not positive");
  return tracePair(w, rho) < -tol;
}

// ---------------------------------------------------------------------------
// Subtraction and finer witnesses

/// epsilon >= 0: the coarsening (1 - eps) W1 + eps Z (requires eps < 1).
/// epsilon < 0: the finer candidate (1 + |eps|) W1 - |eps| Z.
inline Operator subtract(const Operator& w1, const Operator& z, double epsilon) {
  if (!(w1.dims() == z.dims())) throw DimensionError("subtract: dims mismatch");
  if (epsilon >= 1.0) throw ParameterError("subtract: coarsening needs epsilon < 1");
  if (epsilon >= 0.0) return Operator(w1.dims(), (1.0 - epsilon) * w1.matrix() + epsilon * z.matrix());
  const double e = -epsilon;
  return Operator(w1.dims(), (1.0 + e) * w1.matrix() - e * z.matrix());
}

struct FinerCertificate {
  bool certified;
  bool trivial;  // W1 == W2
  double epsilon;
  // (W2 - (1 - eps) W1) / eps at the reported epsilon.
  std::optional<Operator> z;
  double zMinEigenvalue;
};

/// Searches eps in (0, 1) for a PSD Z with W2 = (1 - eps) W1 + eps Z, which
/// certifies W1 finer than W2 relative to all states. The reported eps
/// maximizes the smallest eigenvalue of Z (a grid scan refined by golden
/// section in t = 1/eps, where that eigenvalue is concave).
inline FinerCertificate finerCertificate(const Operator& w1, const Operator& w2, int grid,
                                         double tol = 1e-9) {
  if (!(w1.dims() == w2.dims())) throw DimensionError("finerCertificate: dims mismatch");
  if (maxAbsDiff(w1, w2) < 1e-12) {
    return FinerCertificate{true, true, 0.0, std::nullopt, std::numeric_limits<double>::infinity()};
  }
  if (grid < 2) throw ParameterError("finerCertificate: grid must be >= 2");
  const CMatrix diff = w2.matrix() - w1.matrix();
  auto zAt = [&](double t) { return Operator(w1.dims(), t * diff + w1.matrix()); };
  auto score = [&](double t) { return minEigenvalue(zAt(t)); };

  int bestI = 1;
  double bestScore = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < grid; ++i) {
    const double sc = score(static_cast<double>(grid) / i);
    if (sc > bestScore) {
      bestScore = sc;
      bestI = i;
    }
  }
  double bestT = static_cast<double>(grid) / bestI;
  double lo = static_cast<double>(grid) / std::min(bestI + 1, grid - 1);
  double hi = static_cast<double>(grid) / std::max(bestI - 1, 1);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = score(x1);
  double f2 = score(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = score(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = score(x1);
    }
  }
  const double refinedT = 0.5 * (lo + hi);
  const double refinedScore = score(refinedT);
  if (refinedScore > bestScore) {
    bestScore = refinedScore;
    bestT = refinedT;
  }
  return FinerCertificate{bestScore >= -tol, false, 1.0 / bestT, zAt(bestT), bestScore};
}

// ---------------------------------------------------------------------------
// Maximal subtraction (generalized Rayleigh quotients)

struct PencilExtreme {
  double value;
  CVector vector;
};

/// inf of <x|P|x> / <x|Q|x> over x with <x|Q|x> > 0, evaluated as the lowest
/// eigenvalue of Q^{-1/2} P Q^{-1/2} on the support of Q. Directions in the
/// kernel of Q are eliminated through the Schur complement of P (with a
/// pseudo-inverse); if P is negative or unboundedly coupled there, or Q is
/// indefinite, the infimum is -inf.
inline PencilExtreme pencilMin(const CMatrix& p, const CMatrix& q, double relTol = 1e-10) {
  const Eigen::Index n = q.rows();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<CMatrix> qs(q);
  const RVector& qe = qs.eigenvalues();
  const double qScale = qe.cwiseAbs().maxCoeff();
  if (qScale == 0.0) return PencilExtreme{kInf, CVector::Zero(n)};
  if (qe(0) < -relTol * qScale) return PencilExtreme{-kInf, qs.eigenvectors().col(0)};

  std::vector<Eigen::Index> sup;
  std::vector<Eigen::Index> ker;
  for (Eigen::Index i = 0; i < n; ++i) (qe(i) > relTol * qScale ? sup : ker).push_back(i);
  CMatrix us(n, sup.size());
  RVector dinv(sup.size());
  for (size_t c = 0; c < sup.size(); ++c) {
    us.col(c) = qs.eigenvectors().col(sup[c]);
    dinv(c) = 1.0 / std::sqrt(qe(sup[c]));
  }
  CMatrix reduced = us.adjoint() * p * us;
  CMatrix back = CMatrix::Zero(0, sup.size());
  CMatrix uk(n, ker.size());
  if (!ker.empty()) {
    for (size_t c = 0; c < ker.size(); ++c) uk.col(c) = qs.eigenvectors().col(ker[c]);
    const CMatrix pkk = uk.adjoint() * p * uk;
    const CMatrix pks = uk.adjoint() * p * us;
    const double pScale = std::max(p.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::SelfAdjointEigenSolver<CMatrix> ks(0.5 * (pkk + pkk.adjoint()));
    if (ks.eigenvalues()(0) < -relTol * pScale) {
      return PencilExtreme{-kInf, uk * ks.eigenvectors().col(0)};
    }
    CMatrix pinv = CMatrix::Zero(ker.size(), ker.size());
    for (Eigen::Index i = 0; i < ks.eigenvalues().size(); ++i) {
      const CVector v = ks.eigenvectors().col(i);
      const double ev = ks.eigenvalues()(i);
      if (ev > relTol * pScale) {
        pinv += (1.0 / ev) * v * v.adjoint();
      } else if ((v.adjoint() * pks).norm() > 1e-8 * pScale) {
        return PencilExtreme{-kInf, uk * v};
      }
    }
    reduced -= pks.adjoint() * pinv * pks;
    back = -pinv * pks;
  }
  CMatrix m = dinv.asDiagonal() * reduced * dinv.asDiagonal();
  m = (0.5 * (m + m.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> ms(m);
  const CVector xs = dinv.asDiagonal() * ms.eigenvectors().col(0);
  CVector x = us * xs;
  if (!ker.empty()) x += uk * (back * xs);
  return PencilExtreme{ms.eigenvalues()(0), x};
}

struct PencilSearch {
  double value;
  PureState argA;
  int restarts;
  bool converged;
};

namespace detail {

/// inf over |A> (A factor) of pencilMin(<A|P|A>, <A|Q|A>), by alternating the
/// exact pencil minimization over the B factor and over the A factor.
inline PencilSearch pencilSeeSaw(const Operator& p, const Operator& q, Stream stream,
                                 const OptimizerConfig& config) {
  const Dims fa = p.dims().factorA();
  const Dims fb = p.dims().factorB();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::optional<PencilSearch> best;
  for (int r = 0; r < config.restarts; ++r) {
    auto rng = makeEngine(config.seed, stream, static_cast<std::uint64_t>(r));
    PureState a(fa, randomUnitVector(fa.total(), rng), true);
    double value = kInf;
    bool converged = false;
    for (int it = 0; it < config.maxIters; ++it) {
      const PencilExtreme atA =
          pencilMin(partialExpectation(p, a, Side::A).matrix(), partialExpectation(q, a, Side::A).matrix());
      // atA.value is the bracketed expression evaluated at the current |A>.
      const double improvement = value - atA.value;
      value = std::min(value, atA.value);
      if (std::isinf(atA.value) || improvement < config.convergenceTol) {
        converged = true;
        break;
      }
      const PureState b = PureState::normalize(fb, atA.vector);
      const PencilExtreme atB =
          pencilMin(partialExpectation(p, b, Side::B).matrix(), partialExpectation(q, b, Side::B).matrix());
      if (std::isinf(atB.value) || atB.vector.norm() == 0.0) break;
      a = PureState::normalize(fa, atB.vector);
    }
    if (!best || value < best->value) best = PencilSearch{value, a, config.restarts, converged};
  }
  return *best;
}

}  // namespace detail

struct SubtractionResult {
  // Largest lambda for which (S - lambda Z)/(1 - lambda) stays a k-SW.
  double lambda0;
  // Infimum form: min eigenvalue of <A|Z|A>^{-1/2} <A|S|A> <A|Z|A>^{-1/2}.
  double formulaMin;
  // Reciprocal of the supremum form: max eigenvalue of
  // <A|S|A>^{-1/2} <A|Z|A> <A|S|A>^{-1/2}.
  double formulaSupInv;
  double lambda;
  std::optional<Operator> refined;
  PencilSearch minSearch;
  PencilSearch supSearch;
};

/// (S - lambda Z) / (1 - lambda).
inline Operator refineBySubtraction(const Operator& s, const Operator& z, double lambda) {
  if (!(lambda < 1.0)) throw ParameterError("refineBySubtraction: lambda must be < 1");
  if (!(s.dims() == z.dims())) throw DimensionError("refineBySubtraction: dims mismatch");
  return Operator(s.dims(), (s.matrix() - lambda * z.matrix()) / (1.0 - lambda));
}

/// Largest lambda with <A,B|S_{k-1}|A,B> - lambda <A,B|Z_{k-1}|A,B> >= 0 on
/// all enlarged product states, computed through both quotient forms with
/// independent searches. Z must be non-negative on Schmidt rank <= k; this is
/// spot-checked on sampled states. `lambda` selects the refined operator;
/// when absent, lambda0 is used (if below 1).
inline SubtractionResult lambdaMaxSubtraction(const Operator& s, const Operator& z, int k,
                                              const OptimizerConfig& config,
                                              std::optional<double> lambda = std::nullopt) {
  config.validate();
  requireHermitian(s, "lambdaMaxSubtraction");
  requireHermitian(z, "lambdaMaxSubtraction");
  if (!(s.dims() == z.dims())) throw DimensionError("lambdaMaxSubtraction: dims mismatch");
  if (s.dims().hasAncilla()) throw DimensionError("lambdaMaxSubtraction: expects unextended dims");
  const int maxRank = std::min(s.dims().dA, s.dims().dB);
  if (k < 2 || k > maxRank) throw ParameterError("lambdaMaxSubtraction: k outside [2, min(dA, dB)]");
  if (lambda && !(*lambda < 1.0)) throw ParameterError("lambdaMaxSubtraction: lambda must be < 1");

  auto rng = makeEngine(config.seed, Stream::Sampling);
  std::uniform_int_distribution<int> rankDist(1, std::min(k, maxRank));
  for (int i = 0; i < 256; ++i) {
    const PureState psi = randomStateWithRank(s.dims(), rankDist(rng), rng);
    if (expectation(z, psi) < -config.positivityTol) {
      throw PreconditionError("Z is negative on a sampled state of Schmidt rank <= k");
    }
  }

  const Operator sl = liftOperator(s, k - 1).op;
  const Operator zl = liftOperator(z, k - 1).op;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  PencilSearch minSearch = detail::pencilSeeSaw(sl, zl, Stream::PencilMin, config);
  const double formulaMin = std::max(0.0, minSearch.value);

  const Operator negZ(zl.dims(), -zl.matrix());
  PencilSearch supSearch = detail::pencilSeeSaw(negZ, sl, Stream::PencilSup, config);
  const double sup = -supSearch.value;
  double formulaSupInv = 0.0;
  if (std::isinf(sup)) {
    formulaSupInv = 0.0;
  } else if (sup <= 0.0) {
    formulaSupInv = kInf;
  } else {
    formulaSupInv = 1.0 / sup;
  }

  const double lambda0 = std::min(formulaMin, formulaSupInv);
  const double chosen = lambda.value_or(lambda0);
  std::optional<Operator> refined;
  if (chosen < 1.0) refined = refineBySubtraction(s, z, chosen);
  return SubtractionResult{lambda0,     formulaMin, formulaSupInv,       chosen,
                           std::move(refined), std::move(minSearch), std::move(supSearch)};
}

// ---------------------------------------------------------------------------
// Optimality

struct OptimalityCertificate {
  int spanDim;
  bool optimal;  // false is inconclusive
  int zerosFound;
};

/// Collects product states with |<psi|W|psi>| <= zeroTol from independent
/// see-saw descents and reports the dimension of their span. A span equal
/// to the whole space proves W optimal.
inline OptimalityCertificate optimalityCertificate(const Operator& w, const OptimizerConfig& config) {
  config.validate();
  if (!isEntanglementWitness(w, config).isWitness) {
    throw PreconditionError("optimalityCertificate: operator is not an entanglement witness");
  }
  const Dims fa = w.dims().factorA();
  std::vector<CVector> zeros;
  for (int r = 0; r < config.restarts; ++r) {
    auto rng = makeEngine(config.seed, Stream::Optimality, static_cast<std::uint64_t>(r));
    const SeeSawRun run = seeSaw(w, PureState(fa, randomUnitVector(fa.total(), rng)), config);
    if (std::abs(run.value) <= config.zeroTol) zeros.push_back(tensor(run.argA, run.argB).amplitudes());
  }
  int spanDim = 0;
  if (!zeros.empty()) {
    CMatrix m(w.dims().total(), static_cast<Eigen::Index>(zeros.size()));
    for (size_t c = 0; c < zeros.size(); ++c) m.col(c) = zeros[c];
    Eigen::JacobiSVD<CMatrix> svd(m);
    const RVector& sv = svd.singularValues();
    spanDim = static_cast<int>((sv.array() > 1e-6 * sv(0)).count());
  }
  return OptimalityCertificate{spanDim, spanDim == w.dims().total(), static_cast<int>(zeros.size())};
}

}  // namespace schmidtwit
