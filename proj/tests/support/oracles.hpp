#pragma once

// Reference computations for the tests. Each one is written with explicit
// index loops over the raw amplitude layout and shares no code path with
// the library beyond the Eigen types.

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Tr_B |psi><psi| for a vector laid out as psi[i * nB + j].
inline CMatrix reducedA(const CVector& psi, int nA, int nB) {
  CMatrix rho = CMatrix::Zero(nA, nA);
  for (int i = 0; i < nA; ++i) {
    for (int ip = 0; ip < nA; ++ip) {
      Complex s = 0.0;
      for (int j = 0; j < nB; ++j) s += psi(i * nB + j) * std::conj(psi(ip * nB + j));
      rho(i, ip) = s;
    }
  }
  return rho;
}

/// Eigenvalues of the reduced operator, ascending.
inline Eigen::VectorXd reducedSpectrum(const CVector& psi, int nA, int nB) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(reducedA(psi, nA, nB));
  return es.eigenvalues();
}

/// Schmidt rank as the rank of the reduced operator (relative cutoff on
/// eigenvalues, which are squares of Schmidt coefficients).
inline int reducedRank(const CVector& psi, int nA, int nB, double tol = 1e-16) {
  const Eigen::VectorXd ev = reducedSpectrum(psi, nA, nB);
  const double top = ev.maxCoeff();
  if (top <= 0.0) return 0;
  int r = 0;
  for (int i = 0; i < ev.size(); ++i) r += ev(i) > tol * top ? 1 : 0;
  return r;
}

/// Contraction of both ancillas against sum_s <ss|:
/// out[x * dB + y] = sum_s Psi[((x k + s) dB + y) k + s].
inline CVector contractAncillas(const CVector& big, int dA, int dB, int k) {
  CVector out = CVector::Zero(dA * dB);
  for (int x = 0; x < dA; ++x) {
    for (int y = 0; y < dB; ++y) {
      for (int s = 0; s < k; ++s) out(x * dB + y) += big(((x * k + s) * dB + y) * k + s);
    }
  }
  return out;
}

/// S (x) sum_{s,t} |ss><tt| built in the (A, B, ancA, ancB) order and then
/// permuted to (A, ancA, B, ancB).
inline CMatrix liftedOperator(const CMatrix& s, int dA, int dB, int k) {
  const int n = dA * dB * k * k;
  CMatrix anc = CMatrix::Zero(k * k, k * k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) anc(a * k + a, b * k + b) = 1.0;
  }
  CMatrix plain(n, n);
  for (int r = 0; r < dA * dB; ++r) {
    for (int c = 0; c < dA * dB; ++c) plain.block(r * k * k, c * k * k, k * k, k * k) = s(r, c) * anc;
  }
  auto perm = [&](int idx) {
    const int tB = idx % k;
    const int sA = (idx / k) % k;
    const int j = (idx / (k * k)) % dB;
    const int i = idx / (k * k * dB);
    return ((i * k + sA) * dB + j) * k + tB;
  };
  CMatrix out(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) out(perm(r), perm(c)) = plain(r, c);
  }
  return out;
}

inline double expectation(const CMatrix& m, const CVector& v) {
  Complex s = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    for (int j = 0; j < v.size(); ++j) s += std::conj(v(i)) * m(i, j) * v(j);
  }
  return s.real();
}

/// Entry ((i,j),(k,l)) of (1/(1-a)) (1/d^2 - a |psi+><psi+|).
inline CMatrix isotropic(double a, int d) {
  const int n = d * d;
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          double v = (i == k && j == l) ? 1.0 / n : 0.0;
          if (i == j && k == l) v -= a / d;
          m(i * d + j, k * d + l) = v / (1.0 - a);
        }
      }
    }
  }
  return m;
}

/// Min of <ab|W|ab> over a Bloch-angle grid on both qubits of a 2x2 W.
inline double twoQubitGridMin(const CMatrix& w, int steps) {
  const double pi = std::acos(-1.0);
  auto qubit = [](double th, double ph) {
    Eigen::Vector2cd q;
    q << std::cos(th / 2), std::polar(1.0, ph) * std::sin(th / 2);
    return q;
  };
  double best = std::numeric_limits<double>::infinity();
  for (int t1 = 0; t1 <= steps; ++t1) {
    for (int p1 = 0; p1 < 2 * steps; ++p1) {
      const Eigen::Vector2cd a = qubit(pi * t1 / steps, pi * p1 / steps);
      for (int t2 = 0; t2 <= steps; ++t2) {
        for (int p2 = 0; p2 < 2 * steps; ++p2) {
          const Eigen::Vector2cd b = qubit(pi * t2 / steps, pi * p2 / steps);
          CVector v(4);
          for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) v(i * 2 + j) = a(i) * b(j);
          }
          best = std::min(best, expectation(w, v));
        }
      }
    }
  }
  return best;
}

/// Haar-ish random unit vector from an independent generator.
inline CVector randomUnit(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

}  // namespace oracle
