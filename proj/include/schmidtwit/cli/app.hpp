#pragma once

// Command-line front end. `run` is the whole program minus process
// plumbing so tests can drive it in-process.
//
// Exit codes: 0 success, 2 input error, 3 numerical failure.

#include <algorithm>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schmidtwit/cli/json_io.hpp"
#include "schmidtwit/cli/report.hpp"
#include "schmidtwit/embedding.hpp"
#include "schmidtwit/families.hpp"
#include "schmidtwit/verify.hpp"
#include "schmidtwit/witness.hpp"

namespace schmidtwit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

struct OptimizerFlags {
  std::string configPath;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<int> maxIters;
  std::optional<double> tol;

  void attach(CLI::App* app) {
    app->add_option("--config", configPath, "JSON file with optimizer settings");
    app->add_option("--seed", seed, "RNG seed (default 1)");
    app->add_option("--restarts", restarts, "see-saw restarts per minimization (default 64)");
    app->add_option("--max-iters", maxIters, "see-saw iteration cap (default 500)");
    app->add_option("--tol", tol, "positivity tolerance (default 1e-7)");
  }

  /// Flags override the config file, which overrides the defaults.
  OptimizerConfig resolve() const {
    OptimizerConfig c = configPath.empty() ? OptimizerConfig{} : configFromJson(readJsonFile(configPath));
    if (seed) c.seed = *seed;
    if (restarts) c.restarts = *restarts;
    if (maxIters) c.maxIters = *maxIters;
    if (tol) c.positivityTol = *tol;
    if (c.restarts < 1) throw InputError("field 'restarts' must be a positive integer");
    if (c.maxIters < 1) throw InputError("field 'maxIters' must be a positive integer");
    if (!(c.positivityTol > 0.0)) throw InputError("field 'tol' must be a positive number");
    return c;
  }
};

struct Outputs {
  std::string output;
  std::string report;

  void attach(CLI::App* app) {
    app->add_option("--output", output, "file for the primary result");
    app->add_option("--report", report, "file for the JSON report");
  }
};

struct ClassifyArgs {
  std::string input;
  std::string family;
  std::optional<double> a;
  int dim = 3;
  int maxK = 0;
  OptimizerFlags opt;
  Outputs io;
};

struct ScanArgs {
  double aFrom = 0.05;
  double aTo = 0.35;
  int steps = 61;
  int dim = 3;
  int maxK = 0;
  std::vector<int> levels{1, 2};
  std::optional<double> bisect;
  std::string format = "csv";
  OptimizerFlags opt;
  Outputs io;
};

struct LiftArgs {
  std::string input;
  int k = 2;
  Outputs io;
};

struct VerifyArgs {
  std::string suite;
  int trials = 0;
  std::uint64_t seed = 1;
  std::string dims = "3x3";
  OptimizerFlags opt;
  Outputs io;
};

namespace detail {

inline Dims parseDimsFlag(const std::string& s) {
  static const std::regex re(R"(^\s*(\d+)\s*[xX]\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw InputError("field 'dims' must look like AxB, got '" + s + "'");
  const int a = std::stoi(m[1]);
  const int b = std::stoi(m[2]);
  if (a < 1 || b < 1 || a * b > 100) throw InputError("field 'dims' must be positive with a product <= 100");
  return bipartite(a, b);
}

inline std::string dumpJson(const json& j) { return j.dump(2) + "\n"; }

inline void emitReport(const Report& report, const Outputs& io, std::ostream& out, bool stdoutFree) {
  const std::string text = serialize(report);
  if (!io.report.empty()) {
    writeTextFile(io.report, text);
  } else if (stdoutFree) {
    out << text;
  }
}

inline Operator loadOperator(const json& j) {
  if (!j.contains("matrix")) throw InputError("missing field 'matrix'");
  return operatorFromJson(j);
}

}  // namespace detail

inline int cmdClassify(const ClassifyArgs& args, std::ostream& out) {
  const OptimizerConfig config = args.opt.resolve();
  Report report;
  report.command = "classify";
  report.seed = config.seed;
  report.inputs = json{{"config", toJson(config)}, {"maxK", args.maxK}};

  std::optional<Operator> s;
  if (!args.input.empty()) {
    if (!args.family.empty()) throw InputError("use either --input or --family, not both");
    report.inputs["input"] = args.input;
    s = detail::loadOperator(readJsonFile(args.input));
  } else if (args.family == "isotropic") {
    if (!args.a) throw InputError("field 'a' is required for --family isotropic");
    if (!(*args.a >= 0.0 && *args.a < 1.0)) throw InputError("field 'a' must lie in [0, 1)");
    if (args.dim < 2 || args.dim > 10) throw InputError("field 'dim' must lie in [2, 10]");
    report.inputs["family"] = args.family;
    report.inputs["a"] = *args.a;
    report.inputs["dim"] = args.dim;
    s = makeIsotropicWitness({*args.a, args.dim});
  } else if (args.family.empty()) {
    throw InputError("one of --input or --family is required");
  } else {
    throw InputError("field 'family' must be 'isotropic', got '" + args.family + "'");
  }
  if (!s->isHermitian()) throw InputError("field 'matrix' is not Hermitian");

  const WitnessClassification c = classifySchmidtWitness(*s, args.maxK, config);
  report.result = toJson(c);
  report.diagnostics = json{{"levels", levelsToJson(c.levels)}};

  if (!args.io.output.empty()) {
    writeTextFile(args.io.output, serialize(report));
    if (!args.io.report.empty()) writeTextFile(args.io.report, serialize(report));
  } else {
    detail::emitReport(report, args.io, out, true);
  }
  return kExitOk;
}

inline int cmdScan(const ScanArgs& args, std::ostream& out) {
  const OptimizerConfig config = args.opt.resolve();
  if (args.steps < 1) throw InputError("field 'steps' must be at least 1");
  if (!(args.aFrom >= 0.0 && args.aFrom < 1.0)) throw InputError("field 'a-from' must lie in [0, 1)");
  if (!(args.aTo >= 0.0 && args.aTo < 1.0)) throw InputError("field 'a-to' must lie in [0, 1)");
  if (args.dim < 2 || args.dim > 10) throw InputError("field 'dim' must lie in [2, 10]");
  if (args.format != "csv" && args.format != "json") throw InputError("field 'format' must be csv or json");
  if (args.bisect && !(*args.bisect > 0.0)) throw InputError("field 'bisect' must be positive");
  for (int l : args.levels) {
    if (l < 1 || l > args.dim) throw InputError("field 'levels' entries must lie in [1, dim]");
  }

  ScanOptions opt;
  opt.d = args.dim;
  opt.maxK = args.maxK;
  opt.levels = args.levels;
  opt.bisectPrecision = args.bisect;
  const ScanTable table = thresholdScan(linearGrid(args.aFrom, args.aTo, args.steps), opt, config);

  Report report;
  report.command = "scan";
  report.seed = config.seed;
  report.inputs = json{{"aFrom", args.aFrom}, {"aTo", args.aTo},   {"steps", args.steps},
                       {"dim", args.dim},     {"maxK", args.maxK}, {"levels", args.levels},
                       {"format", args.format}, {"config", toJson(config)}};
  if (args.bisect) report.inputs["bisect"] = *args.bisect;
  report.result = toJson(table);
  int failed = 0;
  bool converged = true;
  for (const ScanRow& r : table.rows) {
    failed += r.failed ? 1 : 0;
    converged = converged && (r.failed || r.converged);
  }
  report.diagnostics = json{{"failedPoints", failed}, {"allConverged", converged}};

  if (args.format == "csv") {
    const std::string csv = scanCsv(table);
    if (!args.io.output.empty()) {
      writeTextFile(args.io.output, csv);
      detail::emitReport(report, args.io, out, true);
    } else {
      out << csv;
      detail::emitReport(report, args.io, out, false);
    }
  } else if (!args.io.output.empty()) {
    writeTextFile(args.io.output, serialize(report));
    if (!args.io.report.empty()) writeTextFile(args.io.report, serialize(report));
  } else {
    detail::emitReport(report, args.io, out, true);
  }
  return failed > 0 ? kExitNumerical : kExitOk;
}

inline int cmdLift(const LiftArgs& args, std::ostream& out) {
  if (args.k < 1) throw InputError("field 'k' must be a positive integer");
  const json in = readJsonFile(args.input);
  Report report;
  report.command = "lift";
  report.inputs = json{{"input", args.input}, {"k", args.k}};
  json object;
  if (in.contains("matrix")) {
    const Operator s = operatorFromJson(in);
    if (s.dims().hasAncilla()) throw InputError("field 'dims' must have kA = kB = 1 for lift");
    const LiftedOperator lifted = liftOperator(s, args.k);
    object = toJson(lifted.op);
    report.result = json{{"kind", "operator"},
                         {"dims", toJson(lifted.op.dims())},
                         {"trace", lifted.op.trace().real()},
                         {"sourceTrace", s.trace().real()},
                         {"object", object}};
  } else if (in.contains("amplitudes")) {
    const PureState psi = stateFromJson(in);
    if (psi.dims().hasAncilla()) throw InputError("field 'dims' must have kA = kB = 1 for lift");
    const LiftedState lifted = liftState(psi, args.k);
    object = toJson(lifted.state);
    report.result = json{{"kind", "state"},
                         {"dims", toJson(lifted.state.dims())},
                         {"sourceRank", lifted.sourceRank},
                         {"blockCount", lifted.blockCount},
                         {"squaredNorm", lifted.state.squaredNorm()},
                         {"object", object}};
    report.diagnostics = json{{"enlargedSchmidtRank", schmidtRank(lifted.state)}};
  } else {
    throw InputError("input must contain field 'matrix' or 'amplitudes'");
  }
  if (!args.io.output.empty()) writeTextFile(args.io.output, detail::dumpJson(object));
  detail::emitReport(report, args.io, out, true);
  return kExitOk;
}

inline int cmdLower(const LiftArgs& args, std::ostream& out) {
  if (args.k < 1) throw InputError("field 'k' must be a positive integer");
  const json in = readJsonFile(args.input);
  if (!in.contains("amplitudes")) throw InputError("missing field 'amplitudes'; lower accepts states only");
  const PureState psi = stateFromJson(in);
  if (psi.dims().kA != args.k || psi.dims().kB != args.k) {
    throw InputError("field 'dims' has ancillas " + std::to_string(psi.dims().kA) + "/" +
                     std::to_string(psi.dims().kB) + " but k = " + std::to_string(args.k));
  }
  const PureState lowered = lowerState(psi, args.k);
  const json object = toJson(lowered);
  Report report;
  report.command = "lower";
  report.inputs = json{{"input", args.input}, {"k", args.k}};
  report.result = json{{"kind", "state"},
                       {"dims", toJson(lowered.dims())},
                       {"squaredNorm", lowered.squaredNorm()},
                       {"object", object}};
  if (lowered.squaredNorm() > 0.0) report.result["schmidtRank"] = schmidtRank(lowered);
  if (!args.io.output.empty()) writeTextFile(args.io.output, detail::dumpJson(object));
  detail::emitReport(report, args.io, out, true);
  return kExitOk;
}

inline int cmdVerify(const VerifyArgs& args, std::ostream& out) {
  const auto& names = suiteNames();
  if (std::find(names.begin(), names.end(), args.suite) == names.end()) {
    throw InputError("field 'suite' must be one of identities, roundtrip, trace, lemma5, oracle; got '" +
                     args.suite + "'");
  }
  if (args.trials < 0) throw InputError("field 'trials' must be non-negative");
  SuiteOptions opt;
  opt.trials = args.trials;
  opt.seed = args.seed;
  opt.dims = detail::parseDimsFlag(args.dims);
  opt.config = args.opt.resolve();
  opt.config.seed = args.seed;
  if (args.suite == "oracle" && opt.dims.dA != 2) throw InputError("field 'dims' must be 2xN for the oracle suite");
  const SuiteResult r = runSuite(args.suite, opt);

  Report report;
  report.command = "verify";
  report.seed = args.seed;
  report.inputs = json{{"suite", args.suite}, {"trials", args.trials}, {"dims", args.dims}};
  if (args.suite == "oracle") report.inputs["config"] = toJson(opt.config);
  report.result = toJson(r);
  report.diagnostics = json{{"effectiveTrials", r.trials}};
  if (!args.io.output.empty()) {
    writeTextFile(args.io.output, serialize(report));
    if (!args.io.report.empty()) writeTextFile(args.io.report, serialize(report));
  } else {
    detail::emitReport(report, args.io, out, true);
  }
  return r.passed ? kExitOk : kExitNumerical;
}

inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schmidt-number witness toolkit", "schmidtwit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ClassifyArgs classify;
  CLI::App* cClassify = app.add_subcommand("classify", "classify an operator as a k-Schmidt witness");
  cClassify->add_option("--input", classify.input, "operator JSON file");
  cClassify->add_option("--family", classify.family, "built-in family (isotropic)");
  cClassify->add_option("--a", classify.a, "family parameter in [0, 1)");
  cClassify->add_option("--dim", classify.dim, "local dimension for the family");
  cClassify->add_option("--max-k", classify.maxK, "highest level to examine (0 = min(dA, dB))");
  classify.opt.attach(cClassify);
  classify.io.attach(cClassify);

  ScanArgs scan;
  CLI::App* cScan = app.add_subcommand("scan", "classify the isotropic family over a grid of a");
  cScan->add_option("--a-from", scan.aFrom, "first grid value");
  cScan->add_option("--a-to", scan.aTo, "last grid value");
  cScan->add_option("--steps", scan.steps, "number of grid points");
  cScan->add_option("--dim", scan.dim, "local dimension");
  cScan->add_option("--max-k", scan.maxK, "highest level to examine");
  cScan->add_option("--levels", scan.levels, "levels reported as prodmin columns")->delimiter(',');
  cScan->add_option("--bisect", scan.bisect, "refine verdict changes to this width");
  cScan->add_option("--format", scan.format, "csv or json");
  scan.opt.attach(cScan);
  scan.io.attach(cScan);

  LiftArgs lift;
  CLI::App* cLift = app.add_subcommand("lift", "lift a state or operator into the ancilla-extended space");
  cLift->add_option("--input", lift.input, "state or operator JSON file")->required();
  cLift->add_option("--k", lift.k, "ancilla dimension");
  lift.io.attach(cLift);

  LiftArgs lower;
  CLI::App* cLower = app.add_subcommand("lower", "lower an ancilla-extended state");
  cLower->add_option("--input", lower.input, "state JSON file")->required();
  cLower->add_option("--k", lower.k, "ancilla dimension");
  lower.io.attach(cLower);

  VerifyArgs verify;
  CLI::App* cVerify = app.add_subcommand("verify", "run a seeded identity suite");
  cVerify->add_option("--suite", verify.suite, "identities | roundtrip | trace | lemma5 | oracle")->required();
  cVerify->add_option("--trials", verify.trials, "trial count (0 = suite default)");
  cVerify->add_option("--seed", verify.seed, "RNG seed");
  cVerify->add_option("--dims", verify.dims, "system dims, e.g. 3x3");
  cVerify->add_option("--restarts", verify.opt.restarts, "see-saw restarts (oracle suite)");
  cVerify->add_option("--config", verify.opt.configPath, "optimizer config JSON (oracle suite)");

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*cClassify) return cmdClassify(classify, out);
    if (*cScan) return cmdScan(scan, out);
    if (*cLift) return cmdLift(lift, out);
    if (*cLower) return cmdLower(lower, out);
    if (*cVerify) return cmdVerify(verify, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace schmidtwit::cli
