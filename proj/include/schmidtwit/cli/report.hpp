#pragma once

#include <cstdint>
#include <string>

#include "schmidtwit/cli/json_io.hpp"
#include "schmidtwit/families.hpp"
#include "schmidtwit/verify.hpp"
#include "schmidtwit/version.hpp"
#include "schmidtwit/witness.hpp"

namespace schmidtwit::cli {

struct Report {
  std::string command;
  json inputs = json::object();
  json result = json::object();
  json diagnostics = json::object();
  std::string version = kVersion;
  std::uint64_t seed = 0;

  bool operator==(const Report&) const = default;
};

inline json toJson(const Report& r) {
  return json{{"command", r.command}, {"inputs", r.inputs},   {"result", r.result},
              {"diagnostics", r.diagnostics}, {"version", r.version}, {"seed", r.seed}};
}

inline Report reportFromJson(const json& j) {
  Report r;
  const json& cmd = requireField(j, "command", "");
  if (!cmd.is_string()) throw InputError("field 'command' must be a string");
  r.command = cmd.get<std::string>();
  r.inputs = requireField(j, "inputs", "");
  r.result = requireField(j, "result", "");
  r.diagnostics = requireField(j, "diagnostics", "");
  const json& version = requireField(j, "version", "");
  if (!version.is_string()) throw InputError("field 'version' must be a string");
  r.version = version.get<std::string>();
  const json& seed = requireField(j, "seed", "");
  if (!seed.is_number_unsigned()) throw InputError("field 'seed' must be a non-negative integer");
  r.seed = seed.get<std::uint64_t>();
  return r;
}

/// Keys are sorted by the json object type, so equal reports serialize
/// to identical bytes.
inline std::string serialize(const Report& r) { return toJson(r).dump(2) + "\n"; }

inline json levelMapToJson(const std::map<int, double>& m) {
  json j = json::object();
  for (const auto& [l, v] : m) j[std::to_string(l)] = v;
  return j;
}

inline json toJson(const WitnessClassification& c) {
  json j{{"verdict", c.name()},
         {"k", c.k},
         {"kIsLowerBound", c.kIsLowerBound},
         {"minEigenvalue", c.minEigenvalue},
         {"perLevelProductMin", levelMapToJson(c.perLevelProductMin)}};
  if (c.detectedState) {
    j["detectedState"] = toJson(*c.detectedState);
    j["detectedRank"] = c.detectedRank;
    j["detectedValue"] = c.detectedValue;
  } else {
    j["detectedState"] = nullptr;
  }
  return j;
}

inline json levelsToJson(const std::map<int, LevelEvidence>& levels) {
  json j = json::object();
  for (const auto& [l, ev] : levels) {
    j[std::to_string(l)] = json{{"productMin", ev.productMin}, {"converged", ev.converged}, {"restarts", ev.restarts}};
  }
  return j;
}

inline json toJson(const ScanRow& r) {
  json j{{"a", r.a}, {"verdict", r.verdictName()}, {"restarts", r.restarts}, {"converged", r.converged}};
  if (r.failed) {
    j["error"] = r.error;
    return j;
  }
  j["k"] = r.k;
  j["minEigenvalue"] = r.minEigenvalue;
  j["productMin"] = levelMapToJson(r.productMin);
  return j;
}

inline json toJson(const ScanTable& t) {
  json rows = json::array();
  for (const ScanRow& r : t.rows) rows.push_back(toJson(r));
  json bounds = json::array();
  for (const ScanBoundary& b : t.boundaries) {
    bounds.push_back(json{{"below", b.below}, {"above", b.above}, {"lo", b.lo}, {"hi", b.hi}, {"estimate", b.estimate}});
  }
  return json{{"d", t.d}, {"levels", t.levels}, {"rows", std::move(rows)}, {"boundaries", std::move(bounds)}};
}

inline json toJson(const SuiteResult& s) {
  return json{{"suite", s.suite},       {"trials", s.trials}, {"tolerance", s.tolerance},
              {"maxError", s.maxError}, {"passed", s.passed}, {"errors", s.errors}};
}

}  // namespace schmidtwit::cli
