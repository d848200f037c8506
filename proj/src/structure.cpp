#include "apxgrp/structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "apxgrp/errors.hpp"
#include "parallel.hpp"

namespace apxgrp {

namespace {

template <typename Pred>
std::size_t count_matching(const MatSet& s, unsigned threads, Pred&& pred) {
  const std::size_t chunks = std::max<std::size_t>(1, s.size() / 4096);
  std::vector<std::size_t> counts(std::min(chunks, std::max<std::size_t>(1, s.size())), 0);
  detail::for_each_chunk(s.size(), counts.size(), threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::size_t local = 0;
    for (std::size_t i = begin; i < end; ++i) local += pred(s.element(i)) ? 1 : 0;
    counts[c] = local;
  });
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

MatSet power_or_self(const MatSet& a, int m, const ExecOptions& opts) {
  if (m < 1) throw UsageError("power m must be >= 1");
  return power_set(a, m, opts);
}

void require_regular(const MatSL& a, const char* what) {
  if (!is_regular_semisimple(a)) {
    throw UsageError(std::string(what) + ": " + a.to_string() + " is not regular semisimple");
  }
}

double log_ratio(std::size_t count, std::size_t base) {
  if (count <= 1 || base <= 1) return 0.0;
  return std::log(static_cast<double>(count)) / std::log(static_cast<double>(base));
}

}  // namespace

TorusId torus_id(const MatSL& a) {
  const Ambient& amb = a.ambient();
  const PrimeField& f = amb.field();
  const int n = amb.n();
  const int width = amb.entries();

  std::vector<std::vector<Residue>> rows;
  MatSL power = MatSL::identity(amb);
  for (int i = 0; i < n; ++i) {
    rows.emplace_back(power.entries().begin(), power.entries().end());
    power = mat_mul(power, a);
  }

  // Reduced row echelon form over F_p.
  int rank = 0;
  for (int col = 0; col < width && rank < n; ++col) {
    int pivot = rank;
    while (pivot < n && rows[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)] == 0) ++pivot;
    if (pivot == n) continue;
    std::swap(rows[static_cast<std::size_t>(pivot)], rows[static_cast<std::size_t>(rank)]);
    auto& prow = rows[static_cast<std::size_t>(rank)];
    const Residue s = f.inv(prow[static_cast<std::size_t>(col)]);
    for (auto& v : prow) v = f.mul(v, s);
    for (int r = 0; r < n; ++r) {
      auto& row = rows[static_cast<std::size_t>(r)];
      const Residue factor = row[static_cast<std::size_t>(col)];
      if (r == rank || factor == 0) continue;
      for (int j = 0; j < width; ++j) {
        row[static_cast<std::size_t>(j)] = f.sub(row[static_cast<std::size_t>(j)], f.mul(factor, prow[static_cast<std::size_t>(j)]));
      }
    }
    ++rank;
  }
  if (rank != n) throw UsageError("torus_id: " + a.to_string() + " is not regular");

  TorusId id{};
  for (int r = 0; r < n; ++r) {
    MatKey k = 0;
    for (Residue v : rows[static_cast<std::size_t>(r)]) k = (k << amb.bits_per_entry()) | v;
    id[static_cast<std::size_t>(r)] = k;
  }
  return id;
}

TorusHandle::TorusHandle(const MatSL& anchor) : anchor_(anchor), id_{} {
  require_regular(anchor, "TorusHandle");
  id_ = torus_id(anchor);
}

ConjClassHandle::ConjClassHandle(const MatSL& anchor) : charpoly_(char_poly(anchor)) {
  require_regular(anchor, "ConjClassHandle");
}

bool ConjClassHandle::contains(const MatSL& x) const {
  // The anchor polynomial is squarefree, so equality already forces x to
  // be regular semisimple, and over the closure such x are all conjugate.
  return x.ambient().p() == charpoly_.p() && char_poly(x) == charpoly_;
}

const char* to_string(VarietyKind kind) {
  switch (kind) {
    case VarietyKind::kTorus: return "torus";
    case VarietyKind::kDeficient: return "deficient";
    case VarietyKind::kConjClass: return "conj_class";
  }
  return "unknown";
}

MatSet centralizer_in(const MatSet& s, const MatSL& a) {
  std::vector<MatKey> keys;
  for (MatKey k : s.keys()) {
    if (commutes(MatSL::decode(s.ambient(), k), a)) keys.push_back(k);
  }
  return MatSet::from_keys(s.ambient(), std::move(keys));
}

MatSet conjugation_orbit(const MatSet& group, const MatSL& a) {
  std::vector<MatKey> keys;
  keys.reserve(group.size());
  for (MatKey k : group.keys()) keys.push_back(conjugate(MatSL::decode(group.ambient(), k), a).key());
  return MatSet::from_keys(group.ambient(), std::move(keys));
}

bool same_torus(const MatSL& a, const MatSL& b) {
  require_regular(a, "same_torus");
  require_regular(b, "same_torus");
  return commutes(a, b);
}

std::size_t torus_intersection(const MatSet& a, int m, const TorusHandle& t, const ExecOptions& opts) {
  const MatSet am = power_or_self(a, m, opts);
  return count_matching(am, opts.threads, [&](const MatSL& x) { return t.contains(x); });
}

std::size_t deficient_count(const MatSet& a, int m, const TorusHandle& t, const ExecOptions& opts) {
  const MatSet am = power_or_self(a, m, opts);
  return count_matching(am, opts.threads, [&](const MatSL& x) { return t.contains(x) && !is_regular_semisimple(x); });
}

std::size_t conj_class_intersection(const MatSet& a, int m, const ConjClassHandle& c, const ExecOptions& opts) {
  const MatSet am = power_or_self(a, m, opts);
  return count_matching(am, opts.threads, [&](const MatSL& x) { return c.contains(x); });
}

LPReport lp_exponent(const MatSet& a, int m, const Variety& v, const ExecOptions& opts) {
  if (a.size() < 2) throw UsageError("lp_exponent: |A| must be at least 2");
  const double n = a.ambient().n();
  const double dim_g = n * n - 1;
  LPReport r;
  r.m = m;
  r.set_size = a.size();
  if (const auto* t = std::get_if<TorusHandle>(&v)) {
    r.variety_kind = VarietyKind::kTorus;
    r.count = torus_intersection(a, m, *t, opts);
    r.predicted_exponent = (n - 1) / dim_g;
  } else {
    r.variety_kind = VarietyKind::kConjClass;
    r.count = conj_class_intersection(a, m, std::get<ConjClassHandle>(v), opts);
    r.predicted_exponent = (n * n - n) / dim_g;
  }
  r.measured_exponent = log_ratio(r.count, r.set_size);
  return r;
}

LPReport lp_exponent_deficient(const MatSet& a, int m, const TorusHandle& t, const ExecOptions& opts) {
  if (a.size() < 2) throw UsageError("lp_exponent: |A| must be at least 2");
  const double n = a.ambient().n();
  LPReport r;
  r.variety_kind = VarietyKind::kDeficient;
  r.m = m;
  r.set_size = a.size();
  r.count = deficient_count(a, m, t, opts);
  r.predicted_exponent = (n - 2) / (n * n - 1);
  r.measured_exponent = log_ratio(r.count, r.set_size);
  return r;
}

namespace {

// Involved torus ids mapped to their lowest-key regular anchor in A^2.
std::map<TorusId, MatKey> involved_map(const MatSet& a, const ExecOptions& opts) {
  if (a.ambient().p() <= static_cast<std::uint32_t>(a.ambient().n())) {
    throw UnsupportedError("involved tori need p > n");
  }
  const MatSet a2 = power_set(a, 2, opts);
  std::map<TorusId, MatKey> tori;
  for (MatKey k : a2.keys()) {
    const MatSL x = MatSL::decode(a.ambient(), k);
    if (!is_regular_semisimple(x)) continue;
    // Keys are scanned in ascending order, so the first anchor is the lowest.
    tori.emplace(torus_id(x), k);
  }
  return tori;
}

}  // namespace

std::vector<TorusHandle> enumerate_involved_tori(const MatSet& a, const ExecOptions& opts) {
  std::vector<MatKey> anchors;
  for (const auto& [id, key] : involved_map(a, opts)) anchors.push_back(key);
  std::sort(anchors.begin(), anchors.end());
  std::vector<TorusHandle> out;
  out.reserve(anchors.size());
  for (MatKey k : anchors) out.emplace_back(MatSL::decode(a.ambient(), k));
  return out;
}

std::vector<InvarianceViolation> check_conjugation_invariance(const MatSet& a, const MatSet& conjugators,
                                                              const ExecOptions& opts) {
  if (!(a.ambient() == conjugators.ambient())) throw UsageError("check_conjugation_invariance: ambient mismatch");
  const auto tori = involved_map(a, opts);
  std::vector<MatKey> anchors;
  for (const auto& [id, key] : tori) anchors.push_back(key);
  std::sort(anchors.begin(), anchors.end());

  std::vector<InvarianceViolation> violations;
  for (MatKey anchor_key : anchors) {
    const MatSL anchor = MatSL::decode(a.ambient(), anchor_key);
    for (MatKey gk : conjugators.keys()) {
      const MatSL g = MatSL::decode(a.ambient(), gk);
      // g^{-1} T g is the torus anchored at g^{-1} a g.
      const MatSL moved = conjugate(mat_inv(g), anchor);
      if (!tori.contains(torus_id(moved))) violations.push_back({anchor, g});
    }
  }
  return violations;
}

InvolvedCount count_involved_vs_bound(const MatSet& a, const ExecOptions& opts) {
  InvolvedCount c;
  c.m = involved_map(a, opts).size();
  c.set_size = a.size();
  c.measured_exponent = log_ratio(c.m, c.set_size);
  const double n = a.ambient().n();
  c.bound_exponent = n / (n + 1);
  return c;
}

Ratio regular_proportion(const MatSet& a, int k, const ExecOptions& opts) {
  if (a.ambient().p() <= static_cast<std::uint32_t>(a.ambient().n())) {
    throw UnsupportedError("regular_proportion needs p > n");
  }
  const MatSet ak = power_or_self(a, k, opts);
  if (ak.empty()) return Ratio(0, 1);
  return Ratio(count_matching(ak, opts.threads, [](const MatSL& x) { return is_regular_semisimple(x); }), ak.size());
}

std::size_t weyl_order(const MatSet& g, const TorusHandle& t, const ExecOptions& opts) {
  if (!is_group(g, opts)) throw UsageError("weyl_order: set is not closed under products");
  const MatSL& a = t.anchor();
  const std::size_t torus = count_matching(g, opts.threads, [&](const MatSL& x) { return commutes(x, a); });
  // x normalises T = Z(a) iff x a x^{-1} lies in T again.
  const std::size_t normalizer =
      count_matching(g, opts.threads, [&](const MatSL& x) { return commutes(conjugate(x, a), a); });
  if (torus == 0 || normalizer % torus != 0) throw InvariantError("weyl_order: |T ∩ G| does not divide |N_G(T)|");
  return normalizer / torus;
}

}  // namespace apxgrp
