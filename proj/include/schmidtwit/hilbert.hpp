#pragma once

// Dimension-aware complex linear algebra for bipartite pure states and
// Hermitian operators, optionally extended by one ancilla per party.
//
// Global index convention: the basis vector |iA>|sA>|jB>|tB> sits at
//   ((iA * kA + sA) * dB + jB) * kB + tB,
// i.e. row-major over (A, ancilla A, B, ancilla B). The "A factor" of a
// space is A (x) ancilla A with side dA*kA, the "B factor" is B (x)
// ancilla B with side dB*kB, and a full vector is the Kronecker product
// of an A-factor vector with a B-factor vector.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <utility>

#include "schmidtwit/errors.hpp"

namespace schmidtwit {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kNormTol = 1e-10;
inline constexpr double kDefaultRankTol = 1e-8;
inline constexpr double kPhaseTol = 1e-12;

struct Dims {
  int dA = 1;
  int dB = 1;
  int kA = 1;
  int kB = 1;

  int sideA() const { return dA * kA; }
  int sideB() const { return dB * kB; }
  int total() const { return sideA() * sideB(); }

  // Dims of a vector living on the A factor alone (B side trivial).
  Dims factorA() const { return Dims{dA, 1, kA, 1}; }
  Dims factorB() const { return Dims{1, dB, 1, kB}; }
  Dims withAncilla(int k) const { return Dims{dA, dB, k, k}; }
  Dims withoutAncilla() const { return Dims{dA, dB, 1, 1}; }

  bool isFactorA() const { return dB == 1 && kB == 1; }
  bool isFactorB() const { return dA == 1 && kA == 1; }
  bool hasAncilla() const { return kA != 1 || kB != 1; }

  int index(int iA, int sA, int jB, int tB) const {
    return ((iA * kA + sA) * dB + jB) * kB + tB;
  }

  void validate() const {
    if (dA < 1 || dB < 1 || kA < 1 || kB < 1) {
      throw DimensionError("dimensions must be positive, got " + str());
    }
  }

  std::string str() const {
    std::ostringstream os;
    os << dA << "x" << dB;
    if (hasAncilla()) os << " (ancilla " << kA << "x" << kB << ")";
    return os.str();
  }

  friend bool operator==(const Dims&, const Dims&) = default;
};

inline Dims bipartite(int dA, int dB) { return Dims{dA, dB, 1, 1}; }

/// Complex amplitude vector with dimension metadata. Lifted states are
/// deliberately unnormalized, so normalization is a flag rather than an
/// invariant of the type.
class PureState {
 public:
  PureState(Dims dims, CVector amplitudes, bool normalized = false)
      : dims_(dims), amplitudes_(std::move(amplitudes)), normalized_(normalized) {
    dims_.validate();
    if (amplitudes_.size() != dims_.total()) {
      throw DimensionError("amplitude vector of length " +
                           std::to_string(amplitudes_.size()) + " does not match dims " +
                           dims_.str());
    }
    if (normalized_ && std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTol) {
      throw ParameterError("state flagged normalized has squared norm " +
                           std::to_string(amplitudes_.squaredNorm()));
    }
  }

  /// Scales `amplitudes` to unit norm and sets the flag.
  static PureState normalize(Dims dims, CVector amplitudes) {
    const double n = amplitudes.norm();
    if (n == 0.0) throw DegenerateStateError("cannot normalize the zero vector");
    amplitudes /= n;
    return PureState(dims, std::move(amplitudes), true);
  }

  static PureState basis(Dims dims, int index) {
    CVector v = CVector::Zero(dims.total());
    if (index < 0 || index >= v.size()) throw DimensionError("basis index out of range");
    v(index) = 1.0;
    return PureState(dims, std::move(v), true);
  }

  static PureState zero(Dims dims) { return PureState(dims, CVector::Zero(dims.total())); }

  const Dims& dims() const { return dims_; }
  const CVector& amplitudes() const { return amplitudes_; }
  bool isNormalized() const { return normalized_; }
  double squaredNorm() const { return amplitudes_.squaredNorm(); }
  double norm() const { return amplitudes_.norm(); }
  Eigen::Index size() const { return amplitudes_.size(); }

  PureState normalized() const { return normalize(dims_, amplitudes_); }

 private:
  Dims dims_;
  CVector amplitudes_;
  bool normalized_;
};

/// |a> (x) |b> for a on an A factor and b on a B factor.
inline PureState tensor(const PureState& a, const PureState& b) {
  if (!a.dims().isFactorA() || !b.dims().isFactorB()) {
    throw DimensionError("tensor expects an A-factor state and a B-factor state, got " +
                         a.dims().str() + " and " + b.dims().str());
  }
  const Dims out{a.dims().dA, b.dims().dB, a.dims().kA, b.dims().kB};
  const CVector& va = a.amplitudes();
  const CVector& vb = b.amplitudes();
  CVector v(out.total());
  for (Eigen::Index i = 0; i < va.size(); ++i) v.segment(i * vb.size(), vb.size()) = va(i) * vb;
  return PureState(out, std::move(v), a.isNormalized() && b.isNormalized());
}

/// Square complex matrix over the global index convention. The hermitian
/// flag is derived from the entries at construction.
class Operator {
 public:
  Operator(Dims dims, CMatrix matrix) : dims_(dims), matrix_(std::move(matrix)) {
    dims_.validate();
    if (matrix_.rows() != dims_.total() || matrix_.cols() != dims_.total()) {
      throw DimensionError("matrix of shape " + std::to_string(matrix_.rows()) + "x" +
                           std::to_string(matrix_.cols()) + " does not match dims " +
                           dims_.str());
    }
    if (!matrix_.allFinite()) throw ParameterError("operator has non-finite entries");
    hermitian_ = hermitianDeviation() < kHermitianTol;
  }

  static Operator identity(Dims dims, double scale = 1.0) {
    return Operator(dims, scale * CMatrix::Identity(dims.total(), dims.total()));
  }

  const Dims& dims() const { return dims_; }
  const CMatrix& matrix() const { return matrix_; }
  bool isHermitian() const { return hermitian_; }
  Complex trace() const { return matrix_.trace(); }

  double hermitianDeviation() const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  }

  friend Operator operator+(const Operator& x, const Operator& y) {
    requireSameDims(x, y);
    return Operator(x.dims_, x.matrix_ + y.matrix_);
  }
  friend Operator operator-(const Operator& x, const Operator& y) {
    requireSameDims(x, y);
    return Operator(x.dims_, x.matrix_ - y.matrix_);
  }
  friend Operator operator*(double s, const Operator& x) { return Operator(x.dims_, s * x.matrix_); }

 private:
  static void requireSameDims(const Operator& x, const Operator& y) {
    if (!(x.dims_ == y.dims_)) {
      throw DimensionError("operator dims differ: " + x.dims_.str() + " vs " + y.dims_.str());
    }
  }

  Dims dims_;
  CMatrix matrix_;
  bool hermitian_ = false;
};

inline void requireHermitian(const Operator& op, const char* where) {
  if (!op.isHermitian()) {
    throw NotHermitianError(std::string(where) + ": operator is not hermitian (deviation " +
                            std::to_string(op.hermitianDeviation()) + ")");
  }
}

inline double maxAbsDiff(const Operator& x, const Operator& y) {
  if (!(x.dims() == y.dims())) throw DimensionError("maxAbsDiff: dims differ");
  return (x.matrix() - y.matrix()).cwiseAbs().maxCoeff();
}

/// |psi><psi|, unnormalized if psi is.
inline Operator projector(const PureState& psi) {
  return Operator(psi.dims(), psi.amplitudes() * psi.amplitudes().adjoint());
}

// ---------------------------------------------------------------------------
// Schmidt decomposition

/// Where to cut the (A, ancilla A, B, ancilla B) index into rows | cols.
enum class Split {
  Parties,         // (A kA | B kB)
  SystemAncillaA,  // (A | kA B kB); on an A-factor state this is (A | kA)
  SystemAncillaB,  // (A kA B | kB); on a B-factor state this is (B | kB)
};

inline int splitRows(const Dims& d, Split split) {
  switch (split) {
    case Split::Parties:
      return d.dA * d.kA;
    case Split::SystemAncillaA:
      return d.dA;
    case Split::SystemAncillaB:
      return d.dA * d.kA * d.dB;
  }
  return 0;
}

/// psi = sum_i coefficients(i) * basisA.col(i) (x) basisB.col(i).
/// Stores all min(rows, cols) terms; `rank` counts those above the cutoff.
struct SchmidtForm {
  RVector coefficients;
  CMatrix basisA;
  CMatrix basisB;
  int rank = 0;

  int terms() const { return static_cast<int>(coefficients.size()); }

  CVector term(int i) const {
    const CVector& a = basisA.col(i);
    const CVector& b = basisB.col(i);
    CVector v(a.size() * b.size());
    for (Eigen::Index r = 0; r < a.size(); ++r) v.segment(r * b.size(), b.size()) = a(r) * b;
    return v;
  }

  CVector reconstruct() const {
    CVector v = CVector::Zero(basisA.rows() * basisB.rows());
    for (int i = 0; i < terms(); ++i) v += coefficients(i) * term(i);
    return v;
  }
};

/// Singular value decomposition of the reshaped amplitude vector.
/// Phase convention: coefficients are real and descending, and the first
/// entry of each basisA column with modulus above 1e-12 is real and
/// non-negative (the compensating phase goes into basisB).
inline SchmidtForm schmidtDecompose(const PureState& psi, Split split = Split::Parties,
                                    double tol = kDefaultRankTol) {
  const Dims& d = psi.dims();
  const int rows = splitRows(d, split);
  const int cols = d.total() / rows;
  if (rows * cols != psi.size()) throw DimensionError("split does not tile the state");
  if (psi.squaredNorm() == 0.0) throw DegenerateStateError("Schmidt decomposition of zero vector");

  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const CMatrix m = Eigen::Map<const RowMajor>(psi.amplitudes().data(), rows, cols);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SchmidtForm out;
  out.coefficients = svd.singularValues();
  out.basisA = svd.matrixU();
  out.basisB = svd.matrixV().conjugate();
  for (int i = 0; i < out.terms(); ++i) {
    for (Eigen::Index r = 0; r < out.basisA.rows(); ++r) {
      const Complex z = out.basisA(r, i);
      if (std::abs(z) > kPhaseTol) {
        const Complex phase = z / std::abs(z);
        out.basisA.col(i) *= std::conj(phase);
        out.basisB.col(i) *= phase;
        break;
      }
    }
  }
  const double cutoff = tol * out.coefficients(0);
  out.rank = static_cast<int>((out.coefficients.array() > cutoff).count());
  return out;
}

/// Number of Schmidt coefficients strictly above tol * (largest coefficient).
inline int schmidtRank(const PureState& psi, double tol = kDefaultRankTol,
                       Split split = Split::Parties) {
  if (!(tol > 0.0)) throw ParameterError("schmidtRank: tol must be positive");
  return schmidtDecompose(psi, split, tol).rank;
}

// ---------------------------------------------------------------------------
// Expectations and spectra

enum class Side { A, B };

/// <e|W|e> with e contracted against the selected factor. For side A the
/// result acts on the B factor (side dB*kB), and vice versa.
inline Operator partialExpectation(const Operator& w, const PureState& e, Side side) {
  const Dims& d = w.dims();
  const Eigen::Index nA = d.sideA();
  const Eigen::Index nB = d.sideB();
  const CMatrix& m = w.matrix();
  const CVector& v = e.amplitudes();
  CMatrix r;
  Dims outDims;
  if (side == Side::A) {
    if (!(e.dims() == d.factorA())) {
      throw DimensionError("partialExpectation: vector dims " + e.dims().str() +
                           " do not match A factor of " + d.str());
    }
    CMatrix x = CMatrix::Zero(d.total(), nB);
    for (Eigen::Index i = 0; i < nA; ++i) x += v(i) * m.middleCols(i * nB, nB);
    r = CMatrix::Zero(nB, nB);
    for (Eigen::Index i = 0; i < nA; ++i) r += std::conj(v(i)) * x.middleRows(i * nB, nB);
    outDims = d.factorB();
  } else {
    if (!(e.dims() == d.factorB())) {
      throw DimensionError("partialExpectation: vector dims " + e.dims().str() +
                           " do not match B factor of " + d.str());
    }
    r.resize(nA, nA);
    for (Eigen::Index i = 0; i < nA; ++i) {
      for (Eigen::Index j = 0; j < nA; ++j) {
        r(i, j) = v.dot(m.block(i * nB, j * nB, nB, nB) * v);
      }
    }
    outDims = d.factorA();
  }
  if (w.isHermitian()) r = (0.5 * (r + r.adjoint())).eval();
  return Operator(outDims, std::move(r));
}

struct EigenPair {
  double value;
  PureState vector;
};

inline RVector eigenvalues(const Operator& h) {
  requireHermitian(h, "eigenvalues");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline EigenPair minEigenpair(const Operator& h) {
  requireHermitian(h, "minEigenpair");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("minEigenpair: eigensolver failed");
  return EigenPair{es.eigenvalues()(0), PureState::normalize(h.dims(), es.eigenvectors().col(0))};
}

inline double minEigenvalue(const Operator& h) { return eigenvalues(h)(0); }

/// <bra|W|ket> without any hermiticity assumption.
inline Complex matrixElement(const Operator& w, const PureState& bra, const PureState& ket) {
  if (!(w.dims() == bra.dims()) || !(w.dims() == ket.dims())) {
    throw DimensionError("matrixElement: dims mismatch");
  }
  return bra.amplitudes().dot(w.matrix() * ket.amplitudes());
}

/// <psi|W|psi>, real for hermitian W.
inline double expectation(const Operator& w, const PureState& psi) {
  requireHermitian(w, "expectation");
  const Complex v = matrixElement(w, psi, psi);
  const double scale = std::max(1.0, psi.squaredNorm() * w.matrix().cwiseAbs().maxCoeff());
  if (std::abs(v.imag()) > 1e-8 * scale) {
    throw NotHermitianError("expectation has imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

/// Tr(W rho).
inline double tracePair(const Operator& w, const Operator& rho) {
  if (!(w.dims() == rho.dims())) throw DimensionError("tracePair: dims mismatch");
  requireHermitian(w, "tracePair");
  requireHermitian(rho, "tracePair");
  const Complex t = (w.matrix().transpose().array() * rho.matrix().array()).sum();
  const double scale = std::max(1.0, w.matrix().cwiseAbs().maxCoeff() *
                                         rho.matrix().cwiseAbs().sum());
  if (std::abs(t.imag()) > 1e-8 * scale) {
    throw NotHermitianError("trace pair has imaginary part " + std::to_string(t.imag()));
  }
  return t.real();
}

/// Transposes the indices of the selected factor (system plus its ancilla).
inline Operator partialTranspose(const Operator& w, Side side) {
  const Dims& d = w.dims();
  const Eigen::Index nA = d.sideA();
  const Eigen::Index nB = d.sideB();
  CMatrix out(d.total(), d.total());
  for (Eigen::Index i = 0; i < nA; ++i) {
    for (Eigen::Index j = 0; j < nA; ++j) {
      auto block = w.matrix().block(i * nB, j * nB, nB, nB);
      if (side == Side::A) {
        out.block(j * nB, i * nB, nB, nB) = block;
      } else {
        out.block(i * nB, j * nB, nB, nB) = block.transpose();
      }
    }
  }
  return Operator(d, std::move(out));
}

}  // namespace schmidtwit
