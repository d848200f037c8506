#pragma once

// File-driven experiment runs behind the `apxgrp` command line tool.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apxgrp/families.hpp"
#include "apxgrp/ffmat.hpp"
#include "json.hpp"

namespace apxgrp {

inline constexpr const char* kVersionTag = "apxgrp 0.1.0";

struct ExperimentConfig {
  int n = 2;
  std::optional<std::uint32_t> p;
  std::vector<std::uint32_t> p_list;
  std::optional<FamilySpec> family;
  /// Powers m (structure, lp) and k (regular proportion).
  std::vector<int> powers{1};
  /// Anchor of the torus / conjugacy class; the first involved torus
  /// anchor when unset.
  std::optional<IntMatrix> anchor;
  /// "generators", "set" or "none".
  std::string conjugators = "generators";
  /// Cayley generators; the standard unipotents when empty.
  std::vector<IntMatrix> generators;
  double exponent_tolerance = 0.05;
  double spectral_residual = 1e-8;
  std::uint64_t iteration_cap = 100'000;
  std::size_t element_budget = 50'000'000;
  std::uint64_t seed = 0;
};

/// Parses the YAML config text. Throws UsageError on any malformed or
/// unknown key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

const std::vector<std::string>& subcommands();

struct RunResult {
  /// {version, subcommand, config, result}: identical for identical
  /// configs regardless of thread count.
  nlohmann::ordered_json payload;
  /// Sweep table, when the subcommand produces one.
  std::optional<std::string> csv;
};

/// Runs one subcommand. Throws the library error types.
RunResult run_experiment(const std::string& subcommand, const ExperimentConfig& config, unsigned threads = 0);

inline constexpr const char* kSweepCsvHeader = "p,group_order,diameter,girth,lambda2,gap,generated";
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace apxgrp
