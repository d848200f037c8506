#include "apxgrp/setops.hpp"

#include <algorithm>
#include <iterator>
#include <queue>

#include "apxgrp/errors.hpp"
#include "parallel.hpp"

namespace apxgrp {

namespace {

void sort_unique(std::vector<MatKey>& keys) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
}

std::vector<MatKey> merge_unique(const std::vector<MatKey>& a, const std::vector<MatKey>& b) {
  std::vector<MatKey> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void require_same_ambient(const MatSet& a, const MatSet& b, const char* what) {
  if (!(a.ambient() == b.ambient())) throw UsageError(std::string(what) + ": ambient mismatch");
}

void require_symmetric_with_identity(const MatSet& a, const char* what) {
  if (!a.contains_identity() || !a.is_symmetric()) {
    throw UsageError(std::string(what) + ": set must be symmetric and contain the identity");
  }
}

void check_budget(std::size_t size, const ExecOptions& opts) {
  if (size > opts.element_budget) {
    throw ResourceError("product set exceeds the element budget of " +
                        std::to_string(opts.element_budget) + " elements");
  }
}

// Upper bound on raw (pre-dedup) products buffered per chunk.
constexpr std::size_t kChunkProducts = std::size_t{1} << 22;

}  // namespace

MatSet MatSet::from_keys(const Ambient& amb, std::vector<MatKey> keys) {
  sort_unique(keys);
  return MatSet(amb, std::move(keys));
}

MatSet MatSet::from_elements(const Ambient& amb, std::span<const MatSL> elements) {
  std::vector<MatKey> keys;
  keys.reserve(elements.size());
  for (const MatSL& x : elements) {
    if (!(x.ambient() == amb)) throw UsageError("MatSet: element has a different ambient");
    keys.push_back(x.key());
  }
  return from_keys(amb, std::move(keys));
}

MatSet MatSet::singleton(const MatSL& x) { return MatSet(x.ambient(), {x.key()}); }

bool MatSet::contains_key(MatKey key) const {
  return std::binary_search(keys_.begin(), keys_.end(), key);
}

bool MatSet::contains(const MatSL& x) const { return x.ambient() == amb_ && contains_key(x.key()); }

std::size_t MatSet::index_of(MatKey key) const {
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  return it != keys_.end() && *it == key ? static_cast<std::size_t>(it - keys_.begin()) : keys_.size();
}

std::vector<MatSL> MatSet::elements() const {
  std::vector<MatSL> out;
  out.reserve(keys_.size());
  for (MatKey k : keys_) out.push_back(MatSL::decode(amb_, k));
  return out;
}

bool MatSet::contains_identity() const { return contains_key(MatSL::identity(amb_).key()); }

bool MatSet::is_symmetric() const {
  return std::all_of(keys_.begin(), keys_.end(),
                     [&](MatKey k) { return contains_key(mat_inv(MatSL::decode(amb_, k)).key()); });
}

MatSet set_union(const MatSet& a, const MatSet& b) {
  require_same_ambient(a, b, "set_union");
  std::vector<MatKey> ka(a.keys().begin(), a.keys().end());
  std::vector<MatKey> kb(b.keys().begin(), b.keys().end());
  return MatSet::from_keys(a.ambient(), merge_unique(ka, kb));
}

MatSet conjugate_set(const MatSet& s, const MatSL& g) {
  const MatSL g_inv = mat_inv(g);
  std::vector<MatKey> keys;
  keys.reserve(s.size());
  for (MatKey k : s.keys()) keys.push_back(mat_mul(mat_mul(g, MatSL::decode(s.ambient(), k)), g_inv).key());
  return MatSet::from_keys(s.ambient(), std::move(keys));
}

MatSet inverse_set(const MatSet& s) {
  std::vector<MatKey> keys;
  keys.reserve(s.size());
  for (MatKey k : s.keys()) keys.push_back(mat_inv(MatSL::decode(s.ambient(), k)).key());
  return MatSet::from_keys(s.ambient(), std::move(keys));
}

MatSet product(const MatSet& a, const MatSet& b, const ExecOptions& opts) {
  require_same_ambient(a, b, "product");
  const Ambient& amb = a.ambient();
  if (a.empty() || b.empty()) return MatSet(amb);

  const std::vector<MatSL> right = b.elements();
  const unsigned threads = detail::resolve_threads(opts.threads);
  const std::size_t rows_per_chunk = std::max<std::size_t>(1, kChunkProducts / right.size());
  const std::size_t total_chunks = (a.size() + rows_per_chunk - 1) / rows_per_chunk;

  // Chunks are processed in waves of `threads`; each chunk yields a sorted
  // unique key list and the wave is merged into the accumulator in chunk
  // order. Set union is order-independent, so the result does not depend on
  // the thread count.
  std::vector<MatKey> acc;
  for (std::size_t wave = 0; wave < total_chunks; wave += threads) {
    const std::size_t wave_chunks = std::min<std::size_t>(threads, total_chunks - wave);
    std::vector<std::vector<MatKey>> partial(wave_chunks);
    detail::for_each_chunk(wave_chunks, wave_chunks, threads, [&](std::size_t c, std::size_t, std::size_t) {
      const std::size_t begin = (wave + c) * rows_per_chunk;
      const std::size_t end = std::min(a.size(), begin + rows_per_chunk);
      std::vector<MatKey>& out = partial[c];
      out.reserve((end - begin) * right.size());
      for (std::size_t i = begin; i < end; ++i) {
        const MatSL x = a.element(i);
        for (const MatSL& y : right) out.push_back(mat_mul(x, y).key());
      }
      sort_unique(out);
      check_budget(out.size(), opts);
    });
    for (auto& part : partial) {
      acc = acc.empty() ? std::move(part) : merge_unique(acc, part);
      check_budget(acc.size(), opts);
    }
  }
  return MatSet::from_keys(amb, std::move(acc));
}

MatSet power_set(const MatSet& a, int k, const ExecOptions& opts) {
  if (k < 1) throw UsageError("power_set: k must be >= 1");
  // A group is its own power; checking is far cheaper than |A|^2 products.
  if (k == 1 || is_group(a, opts)) return a;
  MatSet acc = a;
  for (int i = 2; i <= k; ++i) {
    MatSet next = product(acc, a, opts);
    // A^{j+1} = A^j forces A^i = A^j for all i >= j.
    if (next == acc) break;
    acc = std::move(next);
  }
  return acc;
}

MatSet symmetrize(const MatSet& a) {
  std::vector<MatKey> keys(a.keys().begin(), a.keys().end());
  for (MatKey k : a.keys()) keys.push_back(mat_inv(MatSL::decode(a.ambient(), k)).key());
  keys.push_back(MatSL::identity(a.ambient()).key());
  return MatSet::from_keys(a.ambient(), std::move(keys));
}

namespace {

// Breadth-first closure from the identity. With `within` set, stops and
// returns nullopt as soon as an element outside it appears.
std::optional<MatSet> closure_within(const MatSet& gens, const MatSet* within, const ExecOptions& opts) {
  const Ambient& amb = gens.ambient();
  std::vector<MatKey> visited{MatSL::identity(amb).key()};
  MatSet frontier = MatSet::from_keys(amb, visited);
  while (!frontier.empty() && !gens.empty()) {
    const MatSet reached = product(frontier, gens, opts);
    std::vector<MatKey> fresh;
    std::set_difference(reached.keys().begin(), reached.keys().end(), visited.begin(), visited.end(),
                        std::back_inserter(fresh));
    if (within != nullptr &&
        !std::all_of(fresh.begin(), fresh.end(), [&](MatKey k) { return within->contains_key(k); })) {
      return std::nullopt;
    }
    visited = merge_unique(visited, fresh);
    check_budget(visited.size(), opts);
    frontier = MatSet::from_keys(amb, std::move(fresh));
  }
  return MatSet::from_keys(amb, std::move(visited));
}

}  // namespace

MatSet closure(const MatSet& gens, const ExecOptions& opts) { return *closure_within(gens, nullptr, opts); }

bool is_group(const MatSet& g, const ExecOptions& opts) {
  if (g.empty()) return false;
  // Grow a generating set one missing element at a time; g is a group iff
  // every intermediate closure stays inside g and the last one equals g.
  MatSet gens(g.ambient());
  MatSet generated = MatSet::singleton(MatSL::identity(g.ambient()));
  if (!g.contains_key(generated.keys()[0])) return false;
  for (MatKey k : g.keys()) {
    if (generated.contains_key(k)) continue;
    gens = set_union(gens, MatSet::from_keys(g.ambient(), {k}));
    const auto next = closure_within(gens, &g, opts);
    if (!next) return false;
    generated = *next;
  }
  return generated.size() == g.size();
}

GrowthReport growth_report(const MatSet& a, bool with_certificate, const ExecOptions& opts) {
  require_symmetric_with_identity(a, "growth_report");
  const MatSet a2 = power_set(a, 2, opts);
  const MatSet a3 = a2 == a ? a : product(a2, a, opts);
  GrowthReport r;
  r.size1 = a.size();
  r.size2 = a2.size();
  r.size3 = a3.size();
  r.doubling = Ratio(r.size2, r.size1);
  r.tripling = Ratio(r.size3, r.size1);
  if (with_certificate) r.greedy_k = certify_approximate(a, opts).x.size();
  return r;
}

namespace {

struct Candidate {
  std::size_t gain;
  std::size_t cost;  // 1 for an involution or the identity, else 2
  bool identity;
  MatKey key;        // lower key of the pair {x, x^{-1}}
};

// Max-heap order: better ratio gain/cost first, then the identity, then the
// lowest key.
struct CandidateLess {
  bool operator()(const Candidate& l, const Candidate& r) const {
    const auto lhs = static_cast<unsigned __int128>(l.gain) * r.cost;
    const auto rhs = static_cast<unsigned __int128>(r.gain) * l.cost;
    if (lhs != rhs) return lhs < rhs;
    if (l.identity != r.identity) return r.identity;
    return l.key > r.key;
  }
};

}  // namespace

ControlWitness certify_approximate(const MatSet& a, const ExecOptions& opts) {
  require_symmetric_with_identity(a, "certify_approximate");
  const Ambient& amb = a.ambient();
  const MatSet universe = power_set(a, 2, opts);
  const std::vector<MatSL> a_elems = a.elements();
  std::vector<char> covered(universe.size(), 0);
  std::size_t uncovered = universe.size();

  // Elements of (xA ∪ x^{-1}A) ∩ A·A that are still uncovered.
  auto coverage = [&](const MatSL& x, const MatSL& x_inv, bool only_uncovered) {
    std::vector<std::size_t> hits;
    for (const MatSL* t : {&x, &x_inv}) {
      for (const MatSL& y : a_elems) {
        const std::size_t idx = universe.index_of(mat_mul(*t, y).key());
        if (idx < universe.size() && (!only_uncovered || !covered[idx])) hits.push_back(idx);
      }
      if (x == x_inv) break;
    }
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    return hits;
  };

  std::priority_queue<Candidate, std::vector<Candidate>, CandidateLess> heap;
  for (MatKey k : universe.keys()) {
    const MatSL x = MatSL::decode(amb, k);
    const MatSL x_inv = mat_inv(x);
    if (x_inv.key() < k) continue;  // the pair is represented by its lower key
    heap.push({coverage(x, x_inv, true).size(), x == x_inv ? 1u : 2u, x.is_identity(), k});
  }

  std::vector<MatKey> chosen;
  while (uncovered > 0) {
    if (heap.empty()) throw InvariantError("greedy cover ran out of candidates");
    Candidate top = heap.top();
    heap.pop();
    const MatSL x = MatSL::decode(amb, top.key);
    const MatSL x_inv = mat_inv(x);
    const std::vector<std::size_t> fresh = coverage(x, x_inv, true);
    if (fresh.size() != top.gain) {
      // Gains only shrink, so a stale entry is re-queued with its true gain.
      top.gain = fresh.size();
      if (top.gain > 0) heap.push(top);
      continue;
    }
    for (std::size_t idx : fresh) covered[idx] = 1;
    uncovered -= fresh.size();
    chosen.push_back(x.key());
    chosen.push_back(x_inv.key());
  }

  ControlWitness w{MatSet::from_keys(amb, std::move(chosen)), Ratio{}};
  w.k = Ratio(w.x.size(), 1);
  if (!verify_cover(a, w.x, opts)) throw InvariantError("greedy certificate failed re-verification");
  return w;
}

bool verify_cover(const MatSet& a, const MatSet& x, const ExecOptions& opts) {
  require_same_ambient(a, x, "verify_cover");
  const MatSet a2 = power_set(a, 2, opts);
  std::vector<MatSL> x_inv;
  for (MatKey k : x.keys()) x_inv.push_back(mat_inv(MatSL::decode(x.ambient(), k)));
  return std::all_of(a2.keys().begin(), a2.keys().end(), [&](MatKey k) {
    const MatSL u = MatSL::decode(a.ambient(), k);
    return std::any_of(x_inv.begin(), x_inv.end(), [&](const MatSL& xi) { return a.contains(mat_mul(xi, u)); });
  });
}

bool verify_control(const MatSet& a, const MatSet& b, const MatSet& x, Ratio k) {
  require_same_ambient(a, b, "verify_control");
  require_same_ambient(a, x, "verify_control");
  const auto big = [](std::uint64_t v) { return static_cast<unsigned __int128>(v); };
  if (big(b.size()) * k.den > big(k.num) * a.size()) return false;
  if (big(x.size()) * k.den > big(k.num)) return false;
  std::vector<MatSL> x_inv;
  for (MatKey key : x.keys()) x_inv.push_back(mat_inv(MatSL::decode(x.ambient(), key)));
  for (MatKey key : a.keys()) {
    const MatSL y = MatSL::decode(a.ambient(), key);
    // y ∈ X·B iff x^{-1}y ∈ B for some x; y ∈ B·X iff y x^{-1} ∈ B for some x.
    const bool left = std::any_of(x_inv.begin(), x_inv.end(), [&](const MatSL& xi) { return b.contains(mat_mul(xi, y)); });
    const bool right = std::any_of(x_inv.begin(), x_inv.end(), [&](const MatSL& xi) { return b.contains(mat_mul(y, xi)); });
    if (!left || !right) return false;
  }
  return true;
}

}  // namespace apxgrp
