#pragma once

// Brute-force product minimum for operators whose A factor is a qubit.
// The qubit is swept over a dense (theta, phi) grid of its Bloch sphere and
// the best cells are zoomed in on; for every grid point the B side is
// minimized exactly by diagonalizing the reduced operator, assembled here
// with plain loops. Shares no code with the see-saw.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "schmidtwit/hilbert.hpp"

namespace schmidtwit {

struct GridOracleOptions {
  int thetaSteps = 120;
  int phiSteps = 240;
  int candidates = 8;
  int zoomLevels = 6;
  int zoomPoints = 11;
};

namespace detail {

inline double qubitSliceMin(const CMatrix& w, int nB, double theta, double phi) {
  const Complex e0(std::cos(0.5 * theta), 0.0);
  const Complex e1 = std::polar(std::sin(0.5 * theta), phi);
  const Complex e[2] = {e0, e1};
  CMatrix r = CMatrix::Zero(nB, nB);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Complex c = std::conj(e[i]) * e[j];
      for (int x = 0; x < nB; ++x) {
        for (int y = 0; y < nB; ++y) r(x, y) += c * w(i * nB + x, j * nB + y);
      }
    }
  }
  r = (0.5 * (r + r.adjoint())).eval();
  return Eigen::SelfAdjointEigenSolver<CMatrix>(r, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

}  // namespace detail

inline double gridProductMin(const Operator& w, const GridOracleOptions& opt = {}) {
  if (w.dims().sideA() != 2) throw DimensionError("gridProductMin needs a qubit A factor");
  requireHermitian(w, "gridProductMin");
  const int nB = w.dims().sideB();
  const CMatrix& m = w.matrix();
  const double pi = std::numbers::pi;

  struct Point {
    double value, theta, phi;
  };
  std::vector<Point> coarse;
  const double dTheta = pi / opt.thetaSteps;
  const double dPhi = 2.0 * pi / opt.phiSteps;
  for (int i = 0; i <= opt.thetaSteps; ++i) {
    for (int j = 0; j < opt.phiSteps; ++j) {
      const double th = i * dTheta;
      const double ph = j * dPhi;
      coarse.push_back({detail::qubitSliceMin(m, nB, th, ph), th, ph});
    }
  }
  const auto nCand = std::min<size_t>(opt.candidates, coarse.size());
  std::partial_sort(coarse.begin(), coarse.begin() + nCand, coarse.end(),
                    [](const Point& x, const Point& y) { return x.value < y.value; });
  double best = coarse.front().value;
  for (size_t c = 0; c < nCand; ++c) {
    Point p = coarse[c];
    double hTheta = dTheta;
    double hPhi = dPhi;
    for (int level = 0; level < opt.zoomLevels; ++level) {
      Point local = p;
      const int half = opt.zoomPoints / 2;
      for (int i = -half; i <= half; ++i) {
        for (int j = -half; j <= half; ++j) {
          const double th = std::clamp(p.theta + hTheta * i / half, 0.0, pi);
          const double ph = p.phi + hPhi * j / half;
          const double v = detail::qubitSliceMin(m, nB, th, ph);
          if (v < local.value) local = {v, th, ph};
        }
      }
      p = local;
      hTheta /= 4.0;
      hPhi /= 4.0;
    }
    best = std::min(best, p.value);
  }
  return best;
}

}  // namespace schmidtwit
