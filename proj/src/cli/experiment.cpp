#include "apxgrp/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "apxgrp/cayley.hpp"
#include "apxgrp/errors.hpp"
#include "apxgrp/setops.hpp"
#include "apxgrp/structure.hpp"

namespace apxgrp {

using Json = nlohmann::ordered_json;

namespace {

Ambient ambient_of(const ExperimentConfig& c) {
  if (!c.p) throw UsageError("this subcommand needs 'p'");
  return Ambient(c.n, *c.p);
}

MatSet family_set(const ExperimentConfig& c, const Ambient& amb, const ExecOptions& opts) {
  if (!c.family) throw UsageError("this subcommand needs a 'family' table");
  return build_family(amb, *c.family, opts);
}

GenSet cayley_generators(const ExperimentConfig& c, const Ambient& amb) {
  return c.generators.empty() ? standard_unipotents(amb) : reduce_mod_p(c.generators, amb);
}

// Conjugators for the invariance check: the family's generating set, the
// whole set A, or nothing.
MatSet conjugator_set(const ExperimentConfig& c, const Ambient& amb, const MatSet& a) {
  if (c.conjugators == "none") return MatSet(amb);
  if (c.conjugators == "set") return a;
  const FamilySpec& f = *c.family;
  switch (f.kind) {
    case FamilyKind::kSubgroup:
      if (f.subgroup == "full") return standard_unipotents(amb).generators();
      if (f.subgroup == "generated") return reduce_mod_p(f.matrices, amb).generators();
      return a;
    case FamilyKind::kProgression: {
      const MatSL g = MatSL::from_rows(amb, f.matrices.front());
      return MatSet::from_elements(amb, std::vector<MatSL>{g, mat_inv(g)});
    }
    case FamilyKind::kBall:
      return f.matrices.empty() ? standard_unipotents(amb).generators() : reduce_mod_p(f.matrices, amb).generators();
    case FamilyKind::kModPReduction:
      return reduce_mod_p(f.matrices, amb).generators();
    case FamilyKind::kRandom:
      return random_generators(amb, f.count, f.seed).generators();
    case FamilyKind::kBorel:
      return a;
  }
  return a;
}

Json ratio_json(Ratio r) { return Json{{"ratio", r.to_string()}, {"value", r.value()}}; }

Json matrices_json(const MatSet& s) {
  Json out = Json::array();
  for (MatKey k : s.keys()) out.push_back(MatSL::decode(s.ambient(), k).rows());
  return out;
}

Json lp_json(const LPReport& r, double tolerance) {
  return Json{{"variety_kind", to_string(r.variety_kind)},
              {"m", r.m},
              {"count", r.count},
              {"set_size", r.set_size},
              {"measured_exponent", r.measured_exponent},
              {"predicted_exponent", r.predicted_exponent},
              {"within_tolerance", std::abs(r.measured_exponent - r.predicted_exponent) <= tolerance}};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantError("invariant violated: " + what);
}

Json run_growth(const ExperimentConfig& c, const ExecOptions& opts) {
  const Ambient amb = ambient_of(c);
  const MatSet a = family_set(c, amb, opts);
  const GrowthReport g = growth_report(a, false, opts);
  const ControlWitness w = certify_approximate(a, opts);
  const std::uint64_t k = w.x.size();
  Json checks{{"symmetric_with_identity", a.is_symmetric() && a.contains_identity()},
              {"sizes_monotone", g.size1 <= g.size2 && g.size2 <= g.size3},
              {"cover_verified", verify_cover(a, w.x, opts)},
              {"square_bound", g.size2 <= k * g.size1},
              {"cube_bound", g.size3 <= k * k * g.size1}};
  for (const auto& [name, ok] : checks.items()) require(ok.get<bool>(), name);
  return Json{{"size1", g.size1},
              {"size2", g.size2},
              {"size3", g.size3},
              {"doubling", ratio_json(g.doubling)},
              {"tripling", ratio_json(g.tripling)},
              {"greedy_k", k},
              {"greedy_k_label", "greedy upper bound"},
              {"invariants", checks}};
}

Json run_certify(const ExperimentConfig& c, const ExecOptions& opts) {
  const Ambient amb = ambient_of(c);
  const MatSet a = family_set(c, amb, opts);
  const ControlWitness w = certify_approximate(a, opts);
  const bool verified = verify_cover(a, w.x, opts);
  require(verified, "greedy cover");
  require(w.x.is_symmetric(), "certificate symmetric");
  return Json{{"set_size", a.size()},
              {"k", ratio_json(w.k)},
              {"label", "greedy upper bound"},
              {"x", matrices_json(w.x)},
              {"cover_verified", verified}};
}

std::optional<MatSL> choose_anchor(const ExperimentConfig& c, const Ambient& amb, const MatSet& a,
                                   const ExecOptions& opts) {
  if (c.anchor) return MatSL::from_rows(amb, *c.anchor);
  const auto tori = enumerate_involved_tori(a, opts);
  if (tori.empty()) return std::nullopt;
  return tori.front().anchor();
}

Json involved_json(const MatSet& a, const ExecOptions& opts) {
  const InvolvedCount ic = count_involved_vs_bound(a, opts);
  return Json{{"m", ic.m},
              {"set_size", ic.set_size},
              {"measured_exponent", ic.measured_exponent},
              {"bound_exponent", ic.bound_exponent}};
}

Json invariance_json(const ExperimentConfig& c, const Ambient& amb, const MatSet& a, const ExecOptions& opts) {
  const MatSet conj = conjugator_set(c, amb, a);
  const auto violations = check_conjugation_invariance(a, conj, opts);
  Json list = Json::array();
  for (const auto& v : violations) {
    list.push_back(Json{{"torus_anchor", v.torus_anchor.rows()}, {"conjugator", v.conjugator.rows()}});
  }
  return Json{{"conjugator_count", conj.size()}, {"violation_count", violations.size()}, {"violations", list}};
}

Json lp_reports_json(const ExperimentConfig& c, const MatSet& a, const std::optional<MatSL>& anchor,
                     const ExecOptions& opts) {
  if (!anchor || a.size() < 2) return nullptr;
  const TorusHandle torus(*anchor);
  const ConjClassHandle cls(*anchor);
  Json reports = Json::array();
  for (int m : c.powers) {
    reports.push_back(lp_json(lp_exponent(a, m, torus, opts), c.exponent_tolerance));
    reports.push_back(lp_json(lp_exponent_deficient(a, m, torus, opts), c.exponent_tolerance));
    reports.push_back(lp_json(lp_exponent(a, m, cls, opts), c.exponent_tolerance));
  }
  return Json{{"anchor", anchor->rows()}, {"reports", reports}};
}

Json run_structure(const ExperimentConfig& c, const ExecOptions& opts) {
  const Ambient amb = ambient_of(c);
  const MatSet a = family_set(c, amb, opts);
  const auto anchor = choose_anchor(c, amb, a, opts);
  Json proportions = Json::array();
  for (int k : c.powers) {
    const Ratio r = regular_proportion(a, k, opts);
    proportions.push_back(Json{{"k", k}, {"ratio", r.to_string()}, {"value", r.value()}});
  }
  return Json{{"set_size", a.size()},
              {"involved", involved_json(a, opts)},
              {"invariance", invariance_json(c, amb, a, opts)},
              {"lp", lp_reports_json(c, a, anchor, opts)},
              {"regular_proportion", proportions}};
}

Json run_involved(const ExperimentConfig& c, const ExecOptions& opts) {
  const Ambient amb = ambient_of(c);
  const MatSet a = family_set(c, amb, opts);
  Json anchors = Json::array();
  for (const TorusHandle& t : enumerate_involved_tori(a, opts)) anchors.push_back(t.anchor().rows());
  return Json{{"set_size", a.size()},
              {"involved", involved_json(a, opts)},
              {"anchors", anchors},
              {"invariance", invariance_json(c, amb, a, opts)}};
}

Json run_lp(const ExperimentConfig& c, const ExecOptions& opts) {
  const Ambient amb = ambient_of(c);
  const MatSet a = family_set(c, amb, opts);
  return Json{{"set_size", a.size()}, {"lp", lp_reports_json(c, a, choose_anchor(c, amb, a, opts), opts)}};
}

Json run_diam(const ExperimentConfig& c, const ExecOptions& opts) {
  const Ambient amb = ambient_of(c);
  const BfsStats s = diameter(cayley_generators(c, amb), opts);
  return Json{{"p", amb.p()},
              {"group_order", s.group_order},
              {"generated", s.group_order == amb.group_order()},
              {"diameter", s.diameter},
              {"sphere_sizes", s.sphere_sizes}};
}

Json run_girth(const ExperimentConfig& c, const ExecOptions& opts) {
  const Ambient amb = ambient_of(c);
  return Json{{"p", amb.p()}, {"girth", girth(cayley_generators(c, amb), opts)}};
}

SpectralOptions spectral_options(const ExperimentConfig& c) {
  SpectralOptions s;
  s.iteration_cap = c.iteration_cap;
  s.residual_tolerance = c.spectral_residual;
  return s;
}

Json run_gap(const ExperimentConfig& c, const ExecOptions& opts) {
  const Ambient amb = ambient_of(c);
  const SpectralReport r = spectral_gap(cayley_generators(c, amb), spectral_options(c), opts);
  return Json{{"p", r.p},
              {"n", r.n},
              {"component_order", r.component_order},
              {"generated", r.generated},
              {"lambda2", r.lambda2},
              {"gap", r.gap},
              {"iterations", r.iterations},
              {"residual", r.residual},
              {"converged", r.converged}};
}

std::vector<IntMatrix> sweep_generators(const ExperimentConfig& c) {
  if (!c.generators.empty()) return c.generators;
  std::vector<IntMatrix> gens;
  for (int i = 0; i + 1 < c.n; ++i) {
    for (const auto& [r, col] : {std::pair{i, i + 1}, std::pair{i + 1, i}}) {
      IntMatrix m(static_cast<std::size_t>(c.n), std::vector<std::int64_t>(static_cast<std::size_t>(c.n), 0));
      for (int k = 0; k < c.n; ++k) m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = 1;
      m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] = 1;
      gens.push_back(m);
    }
  }
  return gens;
}

Json run_sweep(const ExperimentConfig& c, const ExecOptions& opts, std::optional<std::string>& csv) {
  std::vector<std::uint32_t> primes = c.p_list;
  if (primes.empty() && c.p) primes.push_back(*c.p);
  const auto rows = sweep(c.n, sweep_generators(c), primes, spectral_options(c), opts);
  Json table = Json::array();
  for (const SweepRow& r : rows) {
    table.push_back(Json{{"p", r.p},
                         {"skipped", r.skipped},
                         {"note", r.note},
                         {"group_order", r.group_order},
                         {"diameter", r.diameter},
                         {"girth", r.girth},
                         {"lambda2", r.lambda2},
                         {"gap", r.gap},
                         {"generated", r.generated},
                         {"converged", r.converged}});
  }
  const PowerLogFit fit = fit_diameter(rows);
  csv = sweep_csv(rows);
  return Json{{"rows", table}, {"diameter_fit", Json{{"a", fit.a}, {"b", fit.b}, {"points", fit.points}}}};
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"growth", "certify", "structure", "involved", "lp",
                                              "diam",   "girth",   "gap",       "sweep"};
  return names;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kSweepCsvHeader << '\n';
  char buf[64];
  for (const SweepRow& r : rows) {
    if (r.skipped) continue;
    out << r.p << ',' << r.group_order << ',' << r.diameter << ',' << r.girth << ',';
    std::snprintf(buf, sizeof buf, "%.12f", r.lambda2);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.12f", r.gap);
    out << buf << ',' << (r.generated ? "true" : "false") << '\n';
  }
  return out.str();
}

RunResult run_experiment(const std::string& subcommand, const ExperimentConfig& config, unsigned threads) {
  ExecOptions opts;
  opts.element_budget = config.element_budget;
  opts.threads = threads;

  RunResult out;
  Json result;
  if (subcommand == "growth") {
    result = run_growth(config, opts);
  } else if (subcommand == "certify") {
    result = run_certify(config, opts);
  } else if (subcommand == "structure") {
    result = run_structure(config, opts);
  } else if (subcommand == "involved") {
    result = run_involved(config, opts);
  } else if (subcommand == "lp") {
    result = run_lp(config, opts);
  } else if (subcommand == "diam") {
    result = run_diam(config, opts);
  } else if (subcommand == "girth") {
    result = run_girth(config, opts);
  } else if (subcommand == "gap") {
    result = run_gap(config, opts);
  } else if (subcommand == "sweep") {
    result = run_sweep(config, opts, out.csv);
  } else {
    throw UsageError("unknown subcommand '" + subcommand + "'");
  }
  out.payload = Json{{"version", kVersionTag},
                     {"subcommand", subcommand},
                     {"config", config_to_json(config)},
                     {"result", std::move(result)}};
  return out;
}

}  // namespace apxgrp
