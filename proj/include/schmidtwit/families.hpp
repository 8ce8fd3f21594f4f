#pragma once

// The isotropic witness family S(a) = (1/(1-a)) (1/d^2 - a |psi+><psi+|),
// seeded fixture generators, and the threshold scanner that classifies S(a)
// over a parameter grid.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "schmidtwit/hilbert.hpp"
#include "schmidtwit/random.hpp"
#include "schmidtwit/seesaw.hpp"
#include "schmidtwit/witness.hpp"

namespace schmidtwit {

struct IsotropicWitnessSpec {
  double a = 0.0;
  int d = 3;
};

inline PureState maximallyEntangledState(int d) {
  if (d < 2) throw ParameterError("maximallyEntangledState: d must be >= 2");
  const Dims dims = bipartite(d, d);
  CVector v = CVector::Zero(dims.total());
  for (int i = 0; i < d; ++i) v(dims.index(i, 0, i, 0)) = 1.0 / std::sqrt(static_cast<double>(d));
  return PureState(dims, std::move(v), true);
}

/// Trace one for every admissible a.
inline Operator makeIsotropicWitness(const IsotropicWitnessSpec& spec) {
  if (!(spec.a >= 0.0 && spec.a < 1.0)) throw ParameterError("isotropic witness needs 0 <= a < 1");
  if (spec.d < 2) throw ParameterError("isotropic witness needs d >= 2");
  const PureState psi = maximallyEntangledState(spec.d);
  const int n = spec.d * spec.d;
  CMatrix m = CMatrix::Identity(n, n) / static_cast<double>(n);
  m -= spec.a * psi.amplitudes() * psi.amplitudes().adjoint();
  m /= (1.0 - spec.a);
  return Operator(psi.dims(), std::move(m));
}

inline PureState randomPureState(const Dims& dims, int rank, std::uint64_t seed) {
  auto rng = makeEngine(seed, Stream::Fixture);
  return randomStateWithRank(dims, rank, rng);
}

/// Exactly Hermitian (mirrored entries) with unit Frobenius norm before a
/// diagonal shift that sets the trace to one.
inline Operator randomHermitian(const Dims& dims, std::uint64_t seed) {
  dims.validate();
  auto rng = makeEngine(seed, Stream::Fixture, 1);
  const Eigen::Index n = dims.total();
  CMatrix g(n, n);
  for (Eigen::Index c = 0; c < n; ++c) g.col(c) = gaussianVector(n, rng);
  CMatrix h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = g(i, i).real();
    for (Eigen::Index j = i + 1; j < n; ++j) {
      h(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
      h(j, i) = std::conj(h(i, j));
    }
  }
  h /= h.norm();
  const double shift = (1.0 - h.trace().real()) / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = h(i, i).real() + shift;
  return Operator(dims, std::move(h));
}

// ---------------------------------------------------------------------------
// Threshold scan

struct ScanRow {
  double a = 0.0;
  bool failed = false;
  std::string error;
  Verdict verdict = Verdict::PositiveOperator;
  int k = 0;
  double minEigenvalue = 0.0;
  std::map<int, double> productMin;
  int restarts = 0;
  bool converged = true;

  std::string verdictName() const { return failed ? "failed" : schmidtwit::verdictName(verdict, k); }
};

struct ScanBoundary {
  std::string below;
  std::string above;
  double lo;
  double hi;
  double estimate;
};

struct ScanTable {
  int d = 3;
  std::vector<int> levels;
  std::vector<ScanRow> rows;
  std::vector<ScanBoundary> boundaries;
};

struct ScanOptions {
  int d = 3;
  int maxK = 0;
  std::vector<int> levels{1, 2};
  // Bisect every verdict change between neighbouring rows down to this width.
  std::optional<double> bisectPrecision;
};

inline ScanRow scanPoint(double a, const ScanOptions& opt, const OptimizerConfig& config) {
  ScanRow row;
  row.a = a;
  row.restarts = config.restarts;
  try {
    const Operator s = makeIsotropicWitness({a, opt.d});
    const WitnessClassification c = classifySchmidtWitness(s, opt.maxK, config);
    row.verdict = c.verdict;
    row.k = c.k;
    row.minEigenvalue = c.minEigenvalue;
    for (const auto& [l, ev] : c.levels) row.converged = row.converged && ev.converged;
    for (int l : opt.levels) {
      if (auto it = c.perLevelProductMin.find(l); it != c.perLevelProductMin.end()) {
        row.productMin[l] = it->second;
        continue;
      }
      const ProductMinResult pm = minProductExpectation(liftOperator(s, l).op, config);
      row.productMin[l] = pm.value;
      row.converged = row.converged && pm.converged;
    }
  } catch (const Error& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

/// Shrinks [lo, hi] around the verdict change until hi - lo <= precision.
inline ScanBoundary bisectBoundary(double lo, double hi, const ScanOptions& opt,
                                   const OptimizerConfig& config, double precision) {
  ScanOptions probe = opt;
  probe.levels.clear();
  const std::string below = scanPoint(lo, probe, config).verdictName();
  const std::string above = scanPoint(hi, probe, config).verdictName();
  if (below == above) throw ParameterError("bisectBoundary: verdicts agree at both ends");
  while (hi - lo > precision) {
    const double mid = 0.5 * (lo + hi);
    if (scanPoint(mid, probe, config).verdictName() == below) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return ScanBoundary{below, above, lo, hi, 0.5 * (lo + hi)};
}

/// Classifies S(a) at every grid point; rows keep grid order. A failing
/// point is marked and the scan continues.
inline ScanTable thresholdScan(const std::vector<double>& grid, const ScanOptions& opt,
                               const OptimizerConfig& config) {
  config.validate();
  if (grid.empty()) throw ParameterError("thresholdScan: empty grid");
  for (double a : grid) {
    if (!(a >= 0.0 && a < 1.0)) throw ParameterError("thresholdScan: grid outside [0, 1)");
  }
  ScanTable table;
  table.d = opt.d;
  table.levels = opt.levels;
  for (double a : grid) table.rows.push_back(scanPoint(a, opt, config));
  if (opt.bisectPrecision) {
    for (size_t i = 1; i < table.rows.size(); ++i) {
      const ScanRow& prev = table.rows[i - 1];
      const ScanRow& next = table.rows[i];
      if (prev.failed || next.failed || prev.verdictName() == next.verdictName()) continue;
      table.boundaries.push_back(bisectBoundary(prev.a, next.a, opt, config, *opt.bisectPrecision));
    }
  }
  return table;
}

/// Evenly spaced grid with `steps` points from `from` to `to` inclusive.
inline std::vector<double> linearGrid(double from, double to, int steps) {
  if (steps < 1) throw ParameterError("grid needs at least one step");
  if (steps == 1) return {from};
  std::vector<double> g(steps);
  for (int i = 0; i < steps; ++i) g[i] = from + (to - from) * i / (steps - 1);
  return g;
}

/// Fixed-point rendering used in every machine-readable table: ten
/// decimals, with negative zero printed as zero so reruns match bytewise.
inline std::string formatFixed(double v, int decimals = 10) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s(buf);
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

/// Columns: a, verdict, k, min_eig, prodmin_l<l>..., restarts, converged.
inline std::string scanCsv(const ScanTable& table) {
  std::ostringstream os;
  os << "a,verdict,k,min_eig";
  for (int l : table.levels) os << ",prodmin_l" << l;
  os << ",restarts,converged\n";
  for (const ScanRow& r : table.rows) {
    os << formatFixed(r.a) << ',' << r.verdictName() << ',' << r.k << ','
       << (r.failed ? "" : formatFixed(r.minEigenvalue));
    for (int l : table.levels) {
      os << ',';
      if (auto it = r.productMin.find(l); !r.failed && it != r.productMin.end()) {
        os << formatFixed(it->second);
      }
    }
    os << ',' << r.restarts << ',' << (r.converged ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace schmidtwit
