// apxgrp <subcommand> --config <path> [--out <path>] [--threads N]
//
// Writes the JSON run report to --out (stdout when omitted). The sweep
// subcommand also writes its table as CSV next to the report, with the
// extension replaced by .csv. Errors go to stderr as a JSON object and set
// the exit code: 2 config, 3 resource budget, 4 internal invariant.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <new>

#include "CLI11.hpp"
#include "apxgrp/errors.hpp"
#include "apxgrp/experiment.hpp"

namespace {

int report_error(const char* kind, const std::string& message, apxgrp::ExitCode code) {
  nlohmann::ordered_json err;
  err["error"] = {{"kind", kind}, {"message", message}, {"exit_code", static_cast<int>(code)}};
  std::cerr << err.dump() << std::endl;
  return static_cast<int>(code);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw apxgrp::UsageError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate subgroups of SL_n(F_p): growth, structure and Cayley-graph experiments"};
  app.set_version_flag("--version", apxgrp::kVersionTag);
  std::string config_path;
  std::string out_path;
  unsigned threads = 0;

  for (const std::string& name : apxgrp::subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "YAML experiment config")->required();
    sub->add_option("--out", out_path, "JSON report path (default: stdout)");
    sub->add_option("--threads", threads, "worker threads (0 = all cores)");
  }
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), apxgrp::ExitCode::kConfigError);
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    const auto start = std::chrono::steady_clock::now();
    const apxgrp::ExperimentConfig config = apxgrp::load_config(config_path);
    apxgrp::RunResult run = apxgrp::run_experiment(subcommand, config, threads);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::ordered_json report = run.payload;
    report["wall_clock_seconds"] = seconds;

    if (out_path.empty()) {
      std::cout << report.dump(2) << std::endl;
    } else {
      const std::filesystem::path out(out_path);
      write_file(out, report.dump(2) + "\n");
      if (run.csv) write_file(std::filesystem::path(out).replace_extension(".csv"), *run.csv);
    }
  } catch (const apxgrp::Error& e) {
    return report_error(e.kind(), e.what(), e.exit_code());
  } catch (const std::bad_alloc& e) {
    return report_error("resource", e.what(), apxgrp::ExitCode::kResourceExceeded);
  } catch (const std::exception& e) {
    return report_error("invariant", e.what(), apxgrp::ExitCode::kInvariantViolation);
  }
  return 0;
}
