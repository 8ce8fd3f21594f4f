#pragma once

// JSON encodings of the in-memory types.
//
//   Dims:     {"dA": int, "dB": int, "kA": int, "kB": int}
//   Operator: {"dims": Dims, "matrix": [[[re, im], ...], ...]}  (row-major)
//   State:    {"dims": Dims, "amplitudes": [[re, im], ...]}
//   Config:   {"seed": u64, "restarts": int, "maxIters": int,
//              "convergenceTol": real, "positivityTol": real, "zeroTol": real}
//
// Decoding errors name the offending field.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "schmidtwit/errors.hpp"
#include "schmidtwit/hilbert.hpp"
#include "schmidtwit/seesaw.hpp"

namespace schmidtwit::cli {

using json = nlohmann::json;

/// Malformed user input; maps to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

inline json complexToJson(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complexFromJson(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError("field '" + field + "' must be a [re, im] pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline const json& requireField(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw InputError("field '" + path + "' must be an object");
  auto it = j.find(key);
  if (it == j.end()) {
    throw InputError("missing field '" + (path.empty() ? key : path + "." + key) + "'");
  }
  return *it;
}

inline int positiveInt(const json& j, const std::string& key, const std::string& path) {
  const json& v = requireField(j, key, path);
  const std::string name = path.empty() ? key : path + "." + key;
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1'000'000) {
    throw InputError("field '" + name + "' must be a positive integer");
  }
  return v.get<int>();
}

inline json toJson(const Dims& d) { return json{{"dA", d.dA}, {"dB", d.dB}, {"kA", d.kA}, {"kB", d.kB}}; }

inline Dims dimsFromJson(const json& j, const std::string& path = "dims") {
  Dims d{positiveInt(j, "dA", path), positiveInt(j, "dB", path), 1, 1};
  d.kA = j.contains("kA") ? positiveInt(j, "kA", path) : 1;
  d.kB = j.contains("kB") ? positiveInt(j, "kB", path) : 1;
  if (static_cast<long long>(d.total()) > 1'000'000) throw InputError("field 'dims' is too large");
  return d;
}

inline json toJson(const PureState& s) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < s.size(); ++i) amps.push_back(complexToJson(s.amplitudes()(i)));
  return json{{"dims", toJson(s.dims())}, {"amplitudes", std::move(amps)}};
}

inline PureState stateFromJson(const json& j) {
  const Dims d = dimsFromJson(requireField(j, "dims", ""));
  const json& amps = requireField(j, "amplitudes", "");
  if (!amps.is_array() || amps.size() != static_cast<size_t>(d.total())) {
    throw InputError("field 'amplitudes' must be an array of " + std::to_string(d.total()) +
                     " [re, im] pairs");
  }
  CVector v(d.total());
  for (size_t i = 0; i < amps.size(); ++i) {
    v(i) = complexFromJson(amps[i], "amplitudes[" + std::to_string(i) + "]");
  }
  return PureState(d, std::move(v));
}

inline json toJson(const Operator& op) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < op.matrix().rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < op.matrix().cols(); ++c) row.push_back(complexToJson(op.matrix()(r, c)));
    rows.push_back(std::move(row));
  }
  return json{{"dims", toJson(op.dims())}, {"matrix", std::move(rows)}};
}

inline Operator operatorFromJson(const json& j) {
  const Dims d = dimsFromJson(requireField(j, "dims", ""));
  const json& rows = requireField(j, "matrix", "");
  const size_t n = static_cast<size_t>(d.total());
  if (!rows.is_array() || rows.size() != n) {
    throw InputError("field 'matrix' must have " + std::to_string(n) + " rows");
  }
  CMatrix m(n, n);
  for (size_t r = 0; r < n; ++r) {
    const std::string rowName = "matrix[" + std::to_string(r) + "]";
    if (!rows[r].is_array() || rows[r].size() != n) {
      throw InputError("field '" + rowName + "' must have " + std::to_string(n) + " entries");
    }
    for (size_t c = 0; c < n; ++c) {
      m(r, c) = complexFromJson(rows[r][c], rowName + "[" + std::to_string(c) + "]");
    }
  }
  return Operator(d, std::move(m));
}

inline json toJson(const OptimizerConfig& c) {
  return json{{"seed", c.seed},
              {"restarts", c.restarts},
              {"maxIters", c.maxIters},
              {"convergenceTol", c.convergenceTol},
              {"positivityTol", c.positivityTol},
              {"zeroTol", c.zeroTol}};
}

/// Missing keys keep their defaults; present keys must have the right type.
inline OptimizerConfig configFromJson(const json& j) {
  if (!j.is_object()) throw InputError("optimizer config must be a JSON object");
  OptimizerConfig c;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw InputError("field 'seed' must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("restarts")) c.restarts = positiveInt(j, "restarts", "");
  if (j.contains("maxIters")) c.maxIters = positiveInt(j, "maxIters", "");
  auto real = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number() || !(j[key].get<double>() > 0.0)) {
      throw InputError(std::string("field '") + key + "' must be a positive number");
    }
    out = j[key].get<double>();
  };
  real("convergenceTol", c.convergenceTol);
  real("positivityTol", c.positivityTol);
  real("zeroTol", c.zeroTol);
  return c;
}

inline json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

inline void writeTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write output file '" + path + "'");
  out << text;
}

}  // namespace schmidtwit::cli
