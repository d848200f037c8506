#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "apxgrp/errors.hpp"
#include "apxgrp/experiment.hpp"
#include "doctest.h"

using namespace apxgrp;
using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("apxgrp_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

fs::path write_text(const std::string& name, const std::string& text) {
  const fs::path path = scratch_dir() / name;
  std::ofstream(path) << text;
  return path;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int exit_code;
  std::string stdout_text;
  std::string stderr_text;
};

Run run_cli(const std::string& args) {
  const fs::path out = scratch_dir() / "stdout.txt";
  const fs::path err = scratch_dir() / "stderr.txt";
  const std::string cmd = std::string(APXGRP_BINARY) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text(out), read_text(err)};
}

const char* kProgression = R"(
n: 2
p: 101
family:
  kind: progression
  g: [[1, 1], [0, 1]]
  N: 5
)";

const char* kFullGroup5 = R"(
n: 2
p: 5
family: {kind: subgroup, subgroup: full}
)";

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(kProgression);
  CHECK(c.n == 2);
  CHECK(c.p == 101u);
  REQUIRE(c.family.has_value());
  CHECK(c.family->kind == FamilyKind::kProgression);
  CHECK(c.family->length == 5);
  CHECK(c.exponent_tolerance == 0.05);
  CHECK(c.spectral_residual == 1e-8);
  CHECK(c.iteration_cap == 100000);
  CHECK(c.element_budget == 50000000);

  const ExperimentConfig gen = parse_config("p: 7\nfamily: {kind: subgroup, generators: [[[1,1],[0,1]]]}\n");
  CHECK(gen.family->subgroup == "generated");
  const ExperimentConfig pw = parse_config("powers: 3\ntolerances: {exponent: 0.1}\n");
  CHECK(pw.powers == std::vector<int>{3});
  CHECK(pw.exponent_tolerance == 0.1);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("n: 2\nbogus: 1\n"), UsageError);
  CHECK_THROWS_AS(parse_config("family: {kind: ball, radius: 1, colour: red}\n"), UsageError);
  CHECK_THROWS_AS(parse_config("family: {kind: nilpotent}\n"), UsageError);
  CHECK_THROWS_AS(parse_config("family: {radius: 1}\n"), UsageError);
  CHECK_THROWS_AS(parse_config("n: 7\n"), UsageError);
  CHECK_THROWS_AS(parse_config("n: two\n"), UsageError);
  CHECK_THROWS_AS(parse_config("powers: [0]\n"), UsageError);
  CHECK_THROWS_AS(parse_config("conjugators: everyone\n"), UsageError);
  CHECK_THROWS_AS(parse_config("[1, 2]\n"), UsageError);
  CHECK_THROWS_AS(parse_config("n: [\n"), UsageError);
  CHECK_THROWS_AS(parse_config("family: {kind: mod_p_reduction, generators: [[[2,0],[0,1]]]}\n"), UsageError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), UsageError);
  CHECK_THROWS_AS(run_experiment("growth", parse_config("n: 2\n")), UsageError);
  CHECK_THROWS_AS(run_experiment("growth", parse_config("p: 5\n")), UsageError);
  CHECK_THROWS_AS(run_experiment("frobnicate", parse_config(kProgression)), UsageError);
}

TEST_CASE("growth on a progression") {
  const Json r = run_experiment("growth", parse_config(kProgression)).payload;
  CHECK(r["version"] == kVersionTag);
  CHECK(r["subcommand"] == "growth");
  CHECK(r["result"]["tripling"]["ratio"] == "31/11");
  CHECK(r["result"]["greedy_k"].get<int>() <= 5);
}

TEST_CASE("growth on a Borel subgroup and a ball") {
  const Json b = run_experiment("growth", parse_config("p: 5\nfamily: {kind: borel}\n")).payload;
  CHECK(b["result"]["greedy_k"] == 1);
  const Json ball = run_experiment("growth", parse_config("p: 7\nfamily: {kind: ball, radius: 2}\n")).payload;
  for (const auto& [name, ok] : ball["result"]["invariants"].items()) CHECK_MESSAGE(ok.get<bool>(), name);
}

TEST_CASE("structure census") {
  const Json full = run_experiment("structure", parse_config(kFullGroup5)).payload["result"];
  CHECK(full["involved"]["m"] == 25);
  CHECK(full["invariance"]["violation_count"] == 0);
  CHECK(full["lp"]["reports"].size() == 3);

  const Json id = run_experiment("structure", parse_config("p: 5\nfamily: {kind: progression, g: [[1,0],[0,1]], N: 3}\n"))
                      .payload["result"];
  CHECK(id["set_size"] == 1);
  CHECK(id["involved"]["m"] == 0);
  CHECK(id["lp"].is_null());
}

TEST_CASE("torus exponent at p = 101") {
  const Json r = run_experiment("lp", parse_config("p: 101\nfamily: {kind: subgroup}\nanchor: [[2, 0], [0, 51]]\n"))
                     .payload["result"];
  const Json torus = r["lp"]["reports"][0];
  CHECK(torus["variety_kind"] == "torus");
  CHECK(torus["count"] == 100);
  CHECK(torus["within_tolerance"] == true);
}

TEST_CASE("cayley subcommands") {
  const ExperimentConfig c = parse_config("p: 3\n");
  CHECK(run_experiment("diam", c).payload["result"]["group_order"] == 24);
  CHECK(run_experiment("girth", c).payload["result"]["girth"].get<int>() > 0);
  CHECK(run_experiment("gap", c).payload["result"]["converged"] == true);

  const RunResult s = run_experiment("sweep", parse_config("p_list: [3, 5, 7]\n"));
  const std::string csv = *s.csv;
  CHECK(csv.rfind(std::string(kSweepCsvHeader) + "\n3,24,", 0) == 0);
  CHECK(csv.find("\n5,120,") != std::string::npos);
  CHECK(csv.find("\n7,336,") != std::string::npos);

  const RunResult empty = run_experiment("sweep", parse_config("n: 2\n"));
  CHECK(*empty.csv == std::string(kSweepCsvHeader) + "\n");
}

TEST_CASE("payloads do not depend on thread count") {
  for (const std::string& sub : {"growth", "certify", "structure", "involved", "lp"}) {
    const ExperimentConfig c = parse_config("p: 7\nfamily: {kind: ball, radius: 2}\npowers: [1, 2]\n");
    CHECK_MESSAGE(run_experiment(sub, c, 1).payload.dump() == run_experiment(sub, c, 4).payload.dump(), sub);
  }
  const ExperimentConfig g = parse_config("p: 7\np_list: [3, 5, 7]\n");
  for (const std::string& sub : {"diam", "girth", "gap", "sweep"}) {
    CHECK_MESSAGE(run_experiment(sub, g, 1).payload.dump() == run_experiment(sub, g, 3).payload.dump(), sub);
  }
}

TEST_CASE("echoed config regenerates the payload") {
  const char* configs[] = {kProgression, kFullGroup5, "p: 5\nfamily: {kind: random, count: 3}\nseed: 9\n",
                           "p: 7\nfamily: {kind: mod_p_reduction, generators: [[[2,1],[1,1]]]}\nanchor: [[2,0],[0,4]]\n"};
  for (const char* text : configs) {
    const Json first = run_experiment("structure", parse_config(text)).payload;
    const ExperimentConfig again = parse_config(first["config"].dump());
    CHECK(run_experiment("structure", again).payload.dump() == first.dump());
  }
}

TEST_CASE("error kinds map to exit codes") {
  CHECK(static_cast<int>(UsageError("x").exit_code()) == 2);
  CHECK(static_cast<int>(UnsupportedError("x").exit_code()) == 2);
  CHECK(static_cast<int>(ResourceError("x").exit_code()) == 3);
  CHECK(static_cast<int>(InvariantError("x").exit_code()) == 4);
}

TEST_CASE("command line tool") {
  const fs::path cfg = write_text("prog.yaml", kProgression);
  const fs::path out = scratch_dir() / "prog.json";
  Run ok = run_cli("growth --config " + cfg.string() + " --out " + out.string() + " --threads 2");
  CHECK(ok.exit_code == 0);
  const Json report = Json::parse(read_text(out));
  CHECK(report["result"]["tripling"]["ratio"] == "31/11");
  CHECK(report.contains("wall_clock_seconds"));

  Run to_stdout = run_cli("certify --config " + cfg.string());
  CHECK(to_stdout.exit_code == 0);
  CHECK(Json::parse(to_stdout.stdout_text)["result"]["cover_verified"] == true);

  const fs::path sweep_cfg = write_text("sweep.yaml", "p_list: [3, 5]\n");
  const fs::path sweep_out = scratch_dir() / "sweep.json";
  CHECK(run_cli("sweep --config " + sweep_cfg.string() + " --out " + sweep_out.string()).exit_code == 0);
  CHECK(read_text(fs::path(sweep_out).replace_extension(".csv")).rfind(kSweepCsvHeader, 0) == 0);

  Run missing = run_cli("growth --config " + (scratch_dir() / "missing.yaml").string());
  CHECK(missing.exit_code == 2);
  CHECK(Json::parse(missing.stderr_text)["error"]["kind"] == "usage");

  const fs::path bad = write_text("bad.yaml", "n: 2\nwat: 1\n");
  CHECK(run_cli("growth --config " + bad.string()).exit_code == 2);
  CHECK(run_cli("growth").exit_code == 2);
  CHECK(run_cli("transmogrify --config " + cfg.string()).exit_code == 2);

  const fs::path small_p = write_text("p2.yaml", "p: 2\nfamily: {kind: subgroup}\n");
  Run unsupported = run_cli("involved --config " + small_p.string());
  CHECK(unsupported.exit_code == 2);
  CHECK(Json::parse(unsupported.stderr_text)["error"]["kind"] == "unsupported");

  const fs::path budget = write_text("budget.yaml", "p: 11\nfamily: {kind: subgroup}\nelement_budget: 100\n");
  Run resource = run_cli("growth --config " + budget.string());
  CHECK(resource.exit_code == 3);
  CHECK(Json::parse(resource.stderr_text)["error"]["exit_code"] == 3);

  fs::remove_all(scratch_dir());
}
