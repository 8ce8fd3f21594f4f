#pragma once

// Embedding of H_A (x) H_B into (H_A (x) K^k) (x) (H_B (x) K^k).
//
// liftState maps a pure state of Schmidt rank <= k to a product state,
// liftOperator maps S to sum_{s,t} S (x) |ss><tt| (ancillas interleaved
// per the global index convention), and the lowering maps go back by
// contracting both ancillas against sum_i <ii|. With these,
//   <psi|S|psi> = <I_k(psi)| S_k |I_k(psi)>
// for every psi, and <A1 B1| S_k |A2 B2> = <J_k(A1 B1)| S |J_k(A2 B2)>.

#include <vector>

#include "schmidtwit/hilbert.hpp"

namespace schmidtwit {

struct LiftedState {
  PureState state;
  int sourceRank;
  int blockCount;
};

struct LiftedOperator {
  Operator op;
  Operator source;
};

struct WeightedState {
  double weight;
  PureState state;
};

using Ensemble = std::vector<WeightedState>;

namespace detail {

inline void requireUnextended(const Dims& d, const char* where) {
  if (d.hasAncilla()) {
    throw DimensionError(std::string(where) + ": expected dims without ancilla, got " + d.str());
  }
}

inline CVector kron(const CVector& a, const CVector& b) {
  CVector v(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) v.segment(i * b.size(), b.size()) = a(i) * b;
  return v;
}

}  // namespace detail

/// Groups the Schmidt terms of psi into consecutive blocks of at most k
/// terms and emits, per block, (sum_i |a_i>|i>) (x) (sum_j l_j |b_j>|j>)
/// with ancilla labels restarting at 0 in every block. Terms below the
/// relative cutoff `tol` are dropped. The result is unnormalized.
inline LiftedState liftState(const PureState& psi, int k, double tol = kDefaultRankTol) {
  if (k < 1) throw ParameterError("liftState: k must be >= 1");
  detail::requireUnextended(psi.dims(), "liftState");
  const SchmidtForm sf = schmidtDecompose(psi, Split::Parties, tol);
  const Dims out = psi.dims().withAncilla(k);
  const int dA = out.dA;
  const int dB = out.dB;
  const int n = sf.rank;
  const int blocks = (n + k - 1) / k;

  CVector total = CVector::Zero(out.total());
  for (int b = 0; b < blocks; ++b) {
    CVector left = CVector::Zero(dA * k);
    CVector right = CVector::Zero(dB * k);
    for (int i = b * k; i < std::min((b + 1) * k, n); ++i) {
      const int s = i - b * k;
      for (int r = 0; r < dA; ++r) left(r * k + s) = sf.basisA(r, i);
      for (int r = 0; r < dB; ++r) right(r * k + s) = sf.coefficients(i) * sf.basisB(r, i);
    }
    total += detail::kron(left, right);
  }
  return LiftedState{PureState(out, std::move(total)), n, blocks};
}

/// sum_{s,t=1..k} S (x) |ss><tt|. Trace is k * Tr(S).
inline LiftedOperator liftOperator(const Operator& s, int k) {
  if (k < 1) throw ParameterError("liftOperator: k must be >= 1");
  const Dims& src = s.dims();
  detail::requireUnextended(src, "liftOperator");
  const Dims out = src.withAncilla(k);
  CMatrix m = CMatrix::Zero(out.total(), out.total());
  const CMatrix& sm = s.matrix();
  for (int st = 0; st < k; ++st) {
    for (int tt = 0; tt < k; ++tt) {
      for (int i = 0; i < src.dA; ++i) {
        for (int j = 0; j < src.dB; ++j) {
          const int row = out.index(i, st, j, st);
          for (int l = 0; l < src.dA; ++l) {
            for (int mm = 0; mm < src.dB; ++mm) {
              m(row, out.index(l, tt, mm, tt)) = sm(i * src.dB + j, l * src.dB + mm);
            }
          }
        }
      }
    }
  }
  return LiftedOperator{Operator(out, std::move(m)), s};
}

/// Lowers |A>(x)|B>: Schmidt-decomposes A across (system | ancilla) as
/// sum l_l |a_l c_l> and B as sum m_m |b_m d_m>, then returns
/// sum_{l,m} F_lm l_l m_m |a_l b_m> with F_lm = sum_i <ii|c_l d_m>.
/// The output has Schmidt rank <= k.
inline PureState lowerProductState(const PureState& a, const PureState& b, int k) {
  if (k < 1) throw ParameterError("lowerProductState: k must be >= 1");
  const Dims& da = a.dims();
  const Dims& db = b.dims();
  if (!da.isFactorA() || !db.isFactorB()) {
    throw DimensionError("lowerProductState expects an A-factor and a B-factor state");
  }
  if (da.kA != k || db.kB != k) {
    throw DimensionError("lowerProductState: ancilla dims " + std::to_string(da.kA) + "/" +
                         std::to_string(db.kB) + " do not match k = " + std::to_string(k));
  }
  const Dims out = bipartite(da.dA, db.dB);
  if (a.squaredNorm() == 0.0 || b.squaredNorm() == 0.0) return PureState::zero(out);

  const SchmidtForm sa = schmidtDecompose(a, Split::SystemAncillaA);
  const SchmidtForm sb = schmidtDecompose(b, Split::SystemAncillaB);
  const CMatrix f = sa.basisB.transpose() * sb.basisB;
  const CMatrix j = sa.basisA * sa.coefficients.asDiagonal() * f *
                    sb.coefficients.asDiagonal() * sb.basisA.transpose();
  CVector v(out.total());
  for (int r = 0; r < out.dA; ++r) {
    for (int c = 0; c < out.dB; ++c) v(r * out.dB + c) = j(r, c);
  }
  return PureState(out, std::move(v));
}

/// Extends lowerProductState to entangled Psi through its Schmidt
/// decomposition across (A kA | B kB), term by term.
inline PureState lowerState(const PureState& psi, int k) {
  const Dims& d = psi.dims();
  if (d.kA != k || d.kB != k) {
    throw DimensionError("lowerState: state dims " + d.str() + " do not carry ancillas of size " +
                         std::to_string(k));
  }
  const Dims out = d.withoutAncilla();
  if (psi.squaredNorm() == 0.0) return PureState::zero(out);
  const SchmidtForm sf = schmidtDecompose(psi, Split::Parties);
  CVector v = CVector::Zero(out.total());
  for (int i = 0; i < sf.terms(); ++i) {
    if (sf.coefficients(i) == 0.0) continue;
    const PureState a(d.factorA(), sf.basisA.col(i));
    const PureState b(d.factorB(), sf.basisB.col(i));
    v += sf.coefficients(i) * lowerProductState(a, b, k).amplitudes();
  }
  return PureState(out, std::move(v));
}

namespace detail {

inline void requireWeights(const Ensemble& ensemble, const char* where) {
  for (const auto& w : ensemble) {
    if (!(w.weight >= 0.0)) throw ParameterError(std::string(where) + ": negative weight");
  }
}

}  // namespace detail

/// Gamma_k = sum_i p_i |I_k(phi_i)><I_k(phi_i)|, unnormalized.
inline Operator liftEnsemble(const Ensemble& ensemble, int k) {
  if (ensemble.empty()) throw ParameterError("liftEnsemble: empty ensemble");
  detail::requireWeights(ensemble, "liftEnsemble");
  const Dims out = ensemble.front().state.dims().withAncilla(k);
  CMatrix m = CMatrix::Zero(out.total(), out.total());
  for (const auto& [p, phi] : ensemble) {
    if (!(phi.dims() == ensemble.front().state.dims())) {
      throw DimensionError("liftEnsemble: members have different dims");
    }
    const CVector v = liftState(phi, k).state.amplitudes();
    m += p * v * v.adjoint();
  }
  return Operator(out, std::move(m));
}

/// theta = sum_i p_i |J_k(Phi_i)><J_k(Phi_i)|.
inline Operator lowerEnsemble(const Ensemble& ensemble, int k) {
  if (ensemble.empty()) throw ParameterError("lowerEnsemble: empty ensemble");
  detail::requireWeights(ensemble, "lowerEnsemble");
  const Dims in = ensemble.front().state.dims();
  const Dims out = in.withoutAncilla();
  CMatrix m = CMatrix::Zero(out.total(), out.total());
  for (const auto& [p, phi] : ensemble) {
    if (!(phi.dims() == in)) throw DimensionError("lowerEnsemble: members have different dims");
    const CVector v = lowerState(phi, k).amplitudes();
    m += p * v * v.adjoint();
  }
  return Operator(out, std::move(m));
}

/// sum_i p_i |phi_i><phi_i| on the members' own dims.
inline Operator mixture(const Ensemble& ensemble) {
  if (ensemble.empty()) throw ParameterError("mixture: empty ensemble");
  detail::requireWeights(ensemble, "mixture");
  const Dims d = ensemble.front().state.dims();
  CMatrix m = CMatrix::Zero(d.total(), d.total());
  for (const auto& [p, phi] : ensemble) m += p * phi.amplitudes() * phi.amplitudes().adjoint();
  return Operator(d, std::move(m));
}

}  // namespace schmidtwit
