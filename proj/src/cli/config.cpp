#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "apxgrp/errors.hpp"
#include "apxgrp/experiment.hpp"

namespace apxgrp {

namespace {

void reject_unknown_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw UsageError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& name) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw UsageError("invalid value for '" + name + "'");
  }
}

IntMatrix parse_matrix(const YAML::Node& node, const std::string& name) {
  if (!node.IsSequence()) throw UsageError("'" + name + "' must be a list of rows");
  IntMatrix m;
  for (const auto& row : node) {
    if (!row.IsSequence()) throw UsageError("'" + name + "' rows must be lists");
    std::vector<std::int64_t> r;
    for (const auto& v : row) r.push_back(scalar<std::int64_t>(v, name));
    m.push_back(std::move(r));
  }
  return m;
}

std::vector<IntMatrix> parse_matrix_list(const YAML::Node& node, const std::string& name) {
  if (!node.IsSequence()) throw UsageError("'" + name + "' must be a list of matrices");
  std::vector<IntMatrix> out;
  for (const auto& m : node) out.push_back(parse_matrix(m, name));
  return out;
}

FamilySpec parse_family(const YAML::Node& node, std::uint64_t default_seed) {
  if (!node.IsMap()) throw UsageError("'family' must be a table");
  reject_unknown_keys(node, {"kind", "subgroup", "g", "N", "generators", "radius", "count", "seed"}, "family");
  if (!node["kind"]) throw UsageError("family.kind is required");
  FamilySpec spec;
  spec.kind = family_kind_from_string(scalar<std::string>(node["kind"], "family.kind"));
  spec.seed = default_seed;
  if (node["subgroup"]) spec.subgroup = scalar<std::string>(node["subgroup"], "family.subgroup");
  if (node["g"]) spec.matrices = {parse_matrix(node["g"], "family.g")};
  if (node["generators"]) {
    if (node["g"]) throw UsageError("family takes either g or generators, not both");
    spec.matrices = parse_matrix_list(node["generators"], "family.generators");
    if (spec.kind == FamilyKind::kSubgroup && !node["subgroup"]) spec.subgroup = "generated";
  }
  if (node["N"]) spec.length = scalar<std::int64_t>(node["N"], "family.N");
  if (node["radius"]) spec.radius = scalar<int>(node["radius"], "family.radius");
  if (node["count"]) spec.count = scalar<int>(node["count"], "family.count");
  if (node["seed"]) spec.seed = scalar<std::uint64_t>(node["seed"], "family.seed");
  spec.validate();
  return spec;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw UsageError(std::string("config is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw UsageError("config must be a table of keys");
  reject_unknown_keys(root,
                      {"n", "p", "p_list", "family", "powers", "anchor", "conjugators", "generators", "tolerances",
                       "iteration_cap", "element_budget", "seed"},
                      "config");
  ExperimentConfig c;
  if (root["n"]) c.n = scalar<int>(root["n"], "n");
  if (root["p"]) c.p = scalar<std::uint32_t>(root["p"], "p");
  if (root["p_list"]) {
    if (!root["p_list"].IsSequence()) throw UsageError("'p_list' must be a list");
    for (const auto& v : root["p_list"]) c.p_list.push_back(scalar<std::uint32_t>(v, "p_list"));
  }
  if (root["seed"]) c.seed = scalar<std::uint64_t>(root["seed"], "seed");
  if (root["family"]) c.family = parse_family(root["family"], c.seed);
  if (root["powers"]) {
    const YAML::Node& node = root["powers"];
    c.powers.clear();
    if (node.IsSequence()) {
      for (const auto& v : node) c.powers.push_back(scalar<int>(v, "powers"));
    } else {
      c.powers.push_back(scalar<int>(node, "powers"));
    }
    for (int m : c.powers) {
      if (m < 1) throw UsageError("powers must be >= 1");
    }
  }
  if (root["anchor"]) c.anchor = parse_matrix(root["anchor"], "anchor");
  if (root["conjugators"]) {
    c.conjugators = scalar<std::string>(root["conjugators"], "conjugators");
    if (c.conjugators != "generators" && c.conjugators != "set" && c.conjugators != "none") {
      throw UsageError("conjugators must be generators, set or none");
    }
  }
  if (root["generators"]) c.generators = parse_matrix_list(root["generators"], "generators");
  if (const YAML::Node tol = root["tolerances"]) {
    if (!tol.IsMap()) throw UsageError("'tolerances' must be a table");
    reject_unknown_keys(tol, {"exponent", "spectral_residual"}, "tolerances");
    if (tol["exponent"]) c.exponent_tolerance = scalar<double>(tol["exponent"], "tolerances.exponent");
    if (tol["spectral_residual"]) {
      c.spectral_residual = scalar<double>(tol["spectral_residual"], "tolerances.spectral_residual");
    }
  }
  if (root["iteration_cap"]) c.iteration_cap = scalar<std::uint64_t>(root["iteration_cap"], "iteration_cap");
  if (root["element_budget"]) c.element_budget = scalar<std::size_t>(root["element_budget"], "element_budget");

  if (c.n < 2 || c.n > kMaxDim) throw UsageError("n must lie in [2, " + std::to_string(kMaxDim) + "]");
  if (c.exponent_tolerance < 0 || c.spectral_residual <= 0) throw UsageError("tolerances must be positive");
  if (c.element_budget == 0) throw UsageError("element_budget must be positive");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["n"] = c.n;
  if (c.p) j["p"] = *c.p;
  if (!c.p_list.empty()) j["p_list"] = c.p_list;
  if (c.family) {
    const FamilySpec& f = *c.family;
    nlohmann::ordered_json fj;
    fj["kind"] = to_string(f.kind);
    fj["subgroup"] = f.subgroup;
    if (f.kind == FamilyKind::kProgression && !f.matrices.empty()) {
      fj["g"] = f.matrices.front();
    } else {
      fj["generators"] = f.matrices;
    }
    fj["N"] = f.length;
    fj["radius"] = f.radius;
    fj["count"] = f.count;
    fj["seed"] = f.seed;
    j["family"] = fj;
  }
  j["powers"] = c.powers;
  if (c.anchor) j["anchor"] = *c.anchor;
  j["conjugators"] = c.conjugators;
  j["generators"] = c.generators;
  j["tolerances"] = {{"exponent", c.exponent_tolerance}, {"spectral_residual", c.spectral_residual}};
  j["iteration_cap"] = c.iteration_cap;
  j["element_budget"] = c.element_budget;
  j["seed"] = c.seed;
  return j;
}

}  // namespace apxgrp
