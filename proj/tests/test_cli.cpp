#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "schmidtwit/cli/app.hpp"

using namespace schmidtwit;
using namespace schmidtwit::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome runCli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("schmidtwit-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string writeJson(const std::string& name, const json& j) {
  const fs::path p = scratch() / name;
  writeTextFile(p.string(), j.dump());
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("classify the isotropic family") {
  const Outcome o = runCli({"classify", "--family", "isotropic", "--a", "0.125", "--dim", "3"});
  REQUIRE(o.code == 0);
  const json r = json::parse(o.out);
  CHECK(r["command"] == "classify");
  CHECK(r["result"]["verdict"] == "3-SW");
  CHECK(r["result"]["k"] == 3);
  CHECK(r["result"]["detectedRank"] == 3);
  CHECK(r["seed"] == 1);
  CHECK(r["version"] == kVersion);
  CHECK(r["inputs"]["config"]["restarts"] == 64);
  CHECK(r["diagnostics"]["levels"].size() == 3);
}

TEST_CASE("classify an operator file") {
  const std::string psd = writeJson("psd.json", toJson(Operator::identity(bipartite(3, 3), 1.0 / 9.0)));
  const Outcome o = runCli({"classify", "--input", psd});
  REQUIRE(o.code == 0);
  CHECK(json::parse(o.out)["result"]["verdict"] == "positive");

  const std::string sw = writeJson("s2.json", toJson(makeIsotropicWitness({0.2, 3})));
  const std::string out = (scratch() / "classify-report.json").string();
  REQUIRE(runCli({"classify", "--input", sw, "--output", out, "--restarts", "16", "--seed", "5"}).code == 0);
  const json r = json::parse(slurp(out));
  CHECK(r["result"]["verdict"] == "2-SW");
  CHECK(r["seed"] == 5);
  CHECK(r["inputs"]["config"]["restarts"] == 16);
}

TEST_CASE("input errors exit with code 2 and name the field") {
  const fs::path garbage = scratch() / "garbage.json";
  writeTextFile(garbage.string(), "{\"dims\": {\"dA\": 3,");
  Outcome o = runCli({"classify", "--input", garbage.string()});
  CHECK(o.code == 2);
  CHECK(o.err.find("malformed JSON") != std::string::npos);

  json bad = toJson(Operator::identity(bipartite(2, 2)));
  bad["matrix"][1][0] = "x";
  o = runCli({"classify", "--input", writeJson("bad-entry.json", bad)});
  CHECK(o.code == 2);
  CHECK(o.err.find("matrix[1][0]") != std::string::npos);

  json noDims = toJson(Operator::identity(bipartite(2, 2)));
  noDims.erase("dims");
  o = runCli({"classify", "--input", writeJson("no-dims.json", noDims)});
  CHECK(o.code == 2);
  CHECK(o.err.find("'dims'") != std::string::npos);

  json badDim = toJson(Operator::identity(bipartite(2, 2)));
  badDim["dims"]["dB"] = 0;
  o = runCli({"classify", "--input", writeJson("bad-dim.json", badDim)});
  CHECK(o.code == 2);
  CHECK(o.err.find("dims.dB") != std::string::npos);

  json shortRows = toJson(Operator::identity(bipartite(2, 2)));
  shortRows["matrix"].erase(3);
  o = runCli({"classify", "--input", writeJson("short.json", shortRows)});
  CHECK(o.code == 2);
  CHECK(o.err.find("'matrix'") != std::string::npos);

  CMatrix skew = CMatrix::Identity(4, 4);
  skew(0, 1) = 0.5;
  o = runCli({"classify", "--input", writeJson("skew.json", toJson(Operator(bipartite(2, 2), skew)))});
  CHECK(o.code == 2);
  CHECK(o.err.find("Hermitian") != std::string::npos);

  CHECK(runCli({"classify", "--input", (scratch() / "missing.json").string()}).code == 2);
  CHECK(runCli({"classify", "--family", "werner", "--a", "0.1"}).code == 2);
  CHECK(runCli({"classify", "--family", "isotropic"}).code == 2);
  CHECK(runCli({"classify", "--family", "isotropic", "--a", "1.5"}).code == 2);
  CHECK(runCli({"classify", "--family", "isotropic", "--a", "0.1", "--max-k", "5"}).code == 2);
  CHECK(runCli({"classify", "--family", "isotropic", "--a", "0.1", "--restarts", "0"}).code == 2);
  CHECK(runCli({"classify", "--bogus"}).code == 2);
  CHECK(runCli({}).code == 2);
}

TEST_CASE("optimizer config file") {
  const std::string cfg = writeJson("config.json", json{{"restarts", 8}, {"seed", 11}, {"maxIters", 100}});
  const Outcome o = runCli({"classify", "--family", "isotropic", "--a", "0.2", "--config", cfg});
  REQUIRE(o.code == 0);
  const json r = json::parse(o.out);
  CHECK(r["inputs"]["config"]["restarts"] == 8);
  CHECK(r["inputs"]["config"]["maxIters"] == 100);
  CHECK(r["seed"] == 11);
  // Flags win over the file.
  const Outcome o2 = runCli({"classify", "--family", "isotropic", "--a", "0.2", "--config", cfg, "--seed", "3"});
  CHECK(json::parse(o2.out)["seed"] == 3);

  const std::string bad = writeJson("bad-config.json", json{{"restarts", "many"}});
  const Outcome o3 = runCli({"classify", "--family", "isotropic", "--a", "0.2", "--config", bad});
  CHECK(o3.code == 2);
  CHECK(o3.err.find("restarts") != std::string::npos);
  CHECK(configFromJson(toJson(OptimizerConfig{})) == OptimizerConfig{});
}

TEST_CASE("scan writes CSV and report") {
  const std::string csv = (scratch() / "scan.csv").string();
  const std::string rep = (scratch() / "scan.json").string();
  const std::vector<std::string> args{"scan", "--a-from", "0.05", "--a-to", "0.2", "--steps", "4",
                                      "--restarts", "16", "--output", csv, "--report", rep};
  const Outcome o = runCli(args);
  REQUIRE(o.code == 0);
  CHECK(o.out.empty());
  const std::string text = slurp(csv);
  CHECK(text.rfind("a,verdict,k,min_eig,prodmin_l1,prodmin_l2,restarts,converged\n", 0) == 0);
  CHECK(text.find("0.0500000000,positive") != std::string::npos);
  CHECK(text.find("0.2000000000,2-SW") != std::string::npos);
  const json r = json::parse(slurp(rep));
  CHECK(r["command"] == "scan");
  CHECK(r["result"]["rows"].size() == 4);

  const std::string csv2 = (scratch() / "scan2.csv").string();
  std::vector<std::string> again = args;
  again[again.size() - 3] = csv2;
  again.back() = (scratch() / "scan2.json").string();
  REQUIRE(runCli(again).code == 0);
  CHECK(slurp(csv2) == text);
  CHECK(slurp(again.back()) == slurp(rep));
}

TEST_CASE("scan to stdout and json format") {
  const Outcome csv = runCli({"scan", "--a-from", "0.1", "--a-to", "0.1", "--steps", "1", "--restarts", "4"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("a,verdict", 0) == 0);
  const Outcome js = runCli({"scan", "--a-from", "0.1", "--a-to", "0.2", "--steps", "2", "--restarts", "8",
                             "--format", "json", "--levels", "1,2,3"});
  REQUIRE(js.code == 0);
  const json r = json::parse(js.out);
  CHECK(r["result"]["levels"] == json::array({1, 2, 3}));
  CHECK(r["result"]["rows"][1]["productMin"].contains("3"));
}

TEST_CASE("scan input errors") {
  CHECK(runCli({"scan", "--steps", "0"}).code == 2);
  CHECK(runCli({"scan", "--a-from", "-0.1"}).code == 2);
  CHECK(runCli({"scan", "--a-to", "1.0"}).code == 2);
  CHECK(runCli({"scan", "--format", "xml", "--steps", "1"}).code == 2);
  CHECK(runCli({"scan", "--levels", "4", "--steps", "1"}).code == 2);
  CHECK(runCli({"scan", "--bisect", "0", "--steps", "1"}).code == 2);
}

TEST_CASE("lift then lower round trip") {
  const PureState psi = randomPureState(bipartite(3, 3), 2, 17);
  const std::string in = writeJson("rank2.json", toJson(psi));
  const std::string lifted = (scratch() / "lifted.json").string();
  const std::string lowered = (scratch() / "lowered.json").string();
  const Outcome up = runCli({"lift", "--input", in, "--k", "2", "--output", lifted});
  REQUIRE(up.code == 0);
  const json ur = json::parse(up.out);
  CHECK(ur["result"]["kind"] == "state");
  CHECK(ur["result"]["sourceRank"] == 2);
  CHECK(ur["result"]["dims"]["kA"] == 2);
  CHECK(ur["diagnostics"]["enlargedSchmidtRank"] == 1);
  CHECK(json::parse(slurp(lifted)) == ur["result"]["object"]);

  const Outcome down = runCli({"lower", "--input", lifted, "--k", "2", "--output", lowered});
  REQUIRE(down.code == 0);
  const PureState back = stateFromJson(json::parse(slurp(lowered)));
  CHECK(back.dims() == psi.dims());
  CHECK((back.amplitudes() - psi.amplitudes()).norm() < 1e-10);
  CHECK(json::parse(down.out)["result"]["schmidtRank"] == 2);
}

TEST_CASE("lift an operator reports the scaled trace") {
  const std::string in = writeJson("id9.json", toJson(Operator::identity(bipartite(3, 3), 1.0 / 9.0)));
  const Outcome o = runCli({"lift", "--input", in, "--k", "2"});
  REQUIRE(o.code == 0);
  const json r = json::parse(o.out);
  CHECK(r["result"]["kind"] == "operator");
  CHECK(std::abs(r["result"]["trace"].get<double>() - 2.0) < 1e-12);
  const Operator big = operatorFromJson(r["result"]["object"]);
  CHECK(big.dims() == (Dims{3, 3, 2, 2}));
}

TEST_CASE("lift and lower errors") {
  const std::string big = writeJson("big.json", toJson(PureState::basis(Dims{3, 3, 2, 2}, 0)));
  Outcome o = runCli({"lower", "--input", big, "--k", "3"});
  CHECK(o.code == 2);
  CHECK(o.err.find("dims") != std::string::npos);
  CHECK(runCli({"lift", "--input", big, "--k", "2"}).code == 2);
  const std::string small = writeJson("small.json", toJson(maximallyEntangledState(3)));
  CHECK(runCli({"lift", "--input", small, "--k", "0"}).code == 2);
  CHECK(runCli({"lower", "--input", small, "--k", "2"}).code == 2);
  CHECK(runCli({"lower", "--input", writeJson("op.json", toJson(Operator::identity(Dims{2, 2, 2, 2})))}).code == 2);
  CHECK(runCli({"lift", "--input", writeJson("empty.json", json::object())}).code == 2);
  CHECK(runCli({"lift"}).code == 2);
}

TEST_CASE("verify suites") {
  Outcome o = runCli({"verify", "--suite", "identities", "--trials", "500", "--seed", "1"});
  REQUIRE(o.code == 0);
  json r = json::parse(o.out);
  CHECK(r["result"]["passed"] == true);
  CHECK(r["result"]["maxError"].get<double>() < 1e-9);
  CHECK(r["result"]["errors"].size() == 500);

  o = runCli({"verify", "--suite", "lemma5", "--trials", "200"});
  REQUIRE(o.code == 0);
  CHECK(json::parse(o.out)["result"]["maxError"].get<double>() < 1e-9);

  o = runCli({"verify", "--suite", "oracle", "--dims", "2x2", "--trials", "5"});
  REQUIRE(o.code == 0);
  CHECK(json::parse(o.out)["result"]["maxError"].get<double>() < 1e-4);

  CHECK(runCli({"verify", "--suite", "roundtrip", "--trials", "50"}).code == 0);
  CHECK(runCli({"verify", "--suite", "trace", "--trials", "50"}).code == 0);

  CHECK(runCli({"verify", "--suite", "nope"}).code == 2);
  CHECK(runCli({"verify", "--suite", "oracle", "--dims", "3x3"}).code == 2);
  CHECK(runCli({"verify", "--suite", "trace", "--dims", "3by3"}).code == 2);
  CHECK(runCli({"verify"}).code == 2);
}

TEST_CASE("reports round-trip and repeat byte for byte") {
  const std::vector<std::string> args{"classify", "--family", "isotropic", "--a", "0.2", "--restarts", "8"};
  const Outcome a = runCli(args);
  const Outcome b = runCli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const Report rep = reportFromJson(json::parse(a.out));
  CHECK(serialize(rep) == a.out);
  CHECK(reportFromJson(toJson(rep)) == rep);
  CHECK_THROWS_AS(reportFromJson(json{{"command", "x"}}), InputError);
}

TEST_CASE("help and version") {
  const Outcome h = runCli({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("classify") != std::string::npos);
  const Outcome v = runCli({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out == std::string(kVersion) + "\n");
}

TEST_CASE("executable exit codes") {
  const std::string exe = SCHMIDTWIT_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("classify --family isotropic --a 0.125 --restarts 8") == 0);
  CHECK(status("scan --steps 0") == 2);
  CHECK(status("verify --suite nope") == 2);
}
