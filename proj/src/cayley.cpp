#include "apxgrp/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <optional>

#include "apxgrp/errors.hpp"
#include "apxgrp/families.hpp"
#include "parallel.hpp"

namespace apxgrp {

GenSet::GenSet(const MatSet& generators) : gens_(generators.ambient()) {
  if (!generators.is_symmetric()) throw UsageError("generating set must be symmetric");
  const MatKey id = MatSL::identity(generators.ambient()).key();
  std::vector<MatKey> keys;
  for (MatKey k : generators.keys()) {
    if (k != id) keys.push_back(k);
  }
  gens_ = MatSet::from_keys(generators.ambient(), std::move(keys));
}

MatSet generate_group(const GenSet& s, const ExecOptions& opts) { return closure(s.generators(), opts); }

namespace {

// Breadth-first spheres. With S symmetric, neighbours of sphere r lie in
// spheres r-1, r, r+1, so only the last two spheres are needed.
template <typename Visit>
void for_each_sphere(const GenSet& s, int max_radius, const ExecOptions& opts, Visit&& visit) {
  const Ambient& amb = s.ambient();
  MatSet prev(amb);
  MatSet cur = MatSet::singleton(MatSL::identity(amb));
  std::size_t total = 1;
  for (int r = 0;; ++r) {
    visit(r, cur);
    if (r == max_radius || s.size() == 0) break;
    const MatSet reached = product(cur, s.generators(), opts);
    std::vector<MatKey> tmp;
    std::vector<MatKey> next;
    std::set_difference(reached.keys().begin(), reached.keys().end(), cur.keys().begin(), cur.keys().end(),
                        std::back_inserter(tmp));
    std::set_difference(tmp.begin(), tmp.end(), prev.keys().begin(), prev.keys().end(), std::back_inserter(next));
    if (next.empty()) break;
    total += next.size();
    if (total > opts.element_budget) throw ResourceError("Cayley graph exceeds the element budget");
    prev = std::move(cur);
    cur = MatSet::from_keys(amb, std::move(next));
  }
}

}  // namespace

BfsStats diameter(const GenSet& s, const ExecOptions& opts) {
  BfsStats stats;
  for_each_sphere(s, -1, opts, [&](int r, const MatSet& sphere) {
    stats.diameter = r;
    stats.sphere_sizes.push_back(sphere.size());
    stats.group_order += sphere.size();
  });
  return stats;
}

MatSet word_ball(const GenSet& s, int radius, const ExecOptions& opts) {
  if (radius < 0) throw UsageError("ball radius must be >= 0");
  std::vector<MatKey> keys;
  for_each_sphere(s, radius, opts, [&](int, const MatSet& sphere) {
    keys.insert(keys.end(), sphere.keys().begin(), sphere.keys().end());
  });
  return MatSet::from_keys(s.ambient(), std::move(keys));
}

CayleyGraph CayleyGraph::build(const GenSet& s, const ExecOptions& opts) {
  MatSet vertices = generate_group(s, opts);
  if (vertices.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw ResourceError("Cayley graph too large to index");
  }
  const std::vector<MatSL> gens = s.generators().elements();
  const std::size_t degree = gens.size();
  std::vector<std::uint32_t> table(vertices.size() * degree);
  const std::size_t chunks = std::max<std::size_t>(1, vertices.size() / 4096);
  detail::for_each_chunk(vertices.size(), chunks, opts.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      const MatSL x = vertices.element(v);
      for (std::size_t j = 0; j < degree; ++j) {
        const std::size_t idx = vertices.index_of(mat_mul(x, gens[j]).key());
        if (idx == vertices.size()) throw InvariantError("closure is not closed under a generator");
        table[v * degree + j] = static_cast<std::uint32_t>(idx);
      }
    }
  });
  return CayleyGraph(std::move(vertices), degree, std::move(table));
}

int girth(const GenSet& s, const ExecOptions& opts) {
  if (s.size() == 0) return 0;
  for (MatKey k : s.generators().keys()) {
    if (mat_mul(MatSL::decode(s.ambient(), k), MatSL::decode(s.ambient(), k)).is_identity()) return 2;
  }
  const CayleyGraph g = CayleyGraph::build(s, opts);
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(g.order(), kNone);
  std::vector<std::uint32_t> parent(g.order(), kNone);
  const std::size_t root = g.vertices().index_of(MatSL::identity(s.ambient()).key());
  std::vector<std::uint32_t> queue{static_cast<std::uint32_t>(root)};
  dist[root] = 0;
  // The root lies on a shortest cycle (vertex transitivity), so the best
  // non-tree edge closes a cycle of exactly the girth.
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t u = queue[head];
    if (2ull * dist[u] >= best) break;
    for (std::size_t j = 0; j < g.degree(); ++j) {
      const std::uint32_t v = g.neighbor(u, j);
      if (dist[v] == kNone) {
        dist[v] = dist[u] + 1;
        parent[v] = u;
        queue.push_back(v);
      } else if (parent[u] != v) {
        best = std::min<std::uint64_t>(best, std::uint64_t{dist[u]} + dist[v] + 1);
      }
    }
  }
  return best == std::numeric_limits<std::uint64_t>::max() ? 0 : static_cast<int>(best);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double dot(const std::vector<double>& a, const std::vector<double>& b, std::vector<double>& scratch) {
  for (std::size_t i = 0; i < a.size(); ++i) scratch[i] = a[i] * b[i];
  return detail::pairwise_sum(scratch.data(), scratch.size());
}

void remove_mean(std::vector<double>& v) {
  const double mean = detail::pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

}  // namespace

SpectralReport spectral_gap(const GenSet& s, const SpectralOptions& sopts, const ExecOptions& opts) {
  SpectralReport r;
  r.p = s.ambient().p();
  r.n = s.ambient().n();
  const CayleyGraph g = CayleyGraph::build(s, opts);
  const std::size_t size = g.order();
  r.component_order = size;
  r.generated = size == s.ambient().group_order();
  if (size <= 1 || g.degree() == 0) {
    // No non-constant eigenvector (or an edgeless graph): report lambda2 = 0.
    r.lambda2 = 0.0;
    r.gap = 1.0;
    return r;
  }

  std::vector<double> v(size);
  for (std::size_t i = 0; i < size; ++i) {
    v[i] = static_cast<double>(splitmix64(g.vertices().keys()[i]) >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  }
  std::vector<double> w(size);
  std::vector<double> scratch(size);
  remove_mean(v);
  double norm = std::sqrt(dot(v, v, scratch));
  for (double& x : v) x /= norm;

  const double inv_degree = 1.0 / static_cast<double>(g.degree());
  const std::size_t chunks = std::max<std::size_t>(1, size / 8192);
  double mu = 0.0;
  r.converged = false;
  r.residual = std::numeric_limits<double>::infinity();
  while (r.iterations < sopts.iteration_cap) {
    ++r.iterations;
    // w = (A + I)/2 v; every entry is computed independently.
    detail::for_each_chunk(size, chunks, opts.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t x = begin; x < end; ++x) {
        double acc = 0.0;
        for (std::size_t j = 0; j < g.degree(); ++j) acc += v[g.neighbor(x, j)];
        w[x] = 0.5 * (v[x] + acc * inv_degree);
      }
    });
    remove_mean(w);
    mu = dot(v, w, scratch);
    for (std::size_t i = 0; i < size; ++i) scratch[i] = (w[i] - mu * v[i]) * (w[i] - mu * v[i]);
    r.residual = std::sqrt(detail::pairwise_sum(scratch.data(), size));
    norm = std::sqrt(dot(w, w, scratch));
    if (norm == 0.0) {
      // v lay in the eigenspace of -1 of A.
      mu = 0.0;
      r.residual = 0.0;
      r.converged = true;
      break;
    }
    for (std::size_t i = 0; i < size; ++i) v[i] = w[i] / norm;
    if (r.residual <= sopts.residual_tolerance) {
      r.converged = true;
      break;
    }
  }
  r.lambda2 = 2.0 * mu - 1.0;
  r.gap = 1.0 - r.lambda2;
  return r;
}

std::vector<SweepRow> sweep(int n, const std::vector<IntMatrix>& generators, const std::vector<std::uint32_t>& primes,
                            const SpectralOptions& sopts, const ExecOptions& opts) {
  std::vector<SweepRow> rows;
  for (std::uint32_t p : primes) {
    SweepRow row;
    row.p = p;
    std::optional<GenSet> s;
    try {
      s.emplace(reduce_mod_p(generators, Ambient(n, p)));
    } catch (const UsageError& e) {
      row.skipped = true;
      row.note = e.what();
      rows.push_back(std::move(row));
      continue;
    }
    const BfsStats bfs = diameter(*s, opts);
    const SpectralReport spec = spectral_gap(*s, sopts, opts);
    row.group_order = bfs.group_order;
    row.diameter = bfs.diameter;
    row.girth = girth(*s, opts);
    row.lambda2 = spec.lambda2;
    row.gap = spec.gap;
    row.generated = spec.generated;
    row.converged = spec.converged;
    if (!row.generated) row.note = "generators do not generate SL_n(F_p)";
    rows.push_back(std::move(row));
  }
  return rows;
}

PowerLogFit fit_diameter(const std::vector<SweepRow>& rows) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const SweepRow& r : rows) {
    if (r.skipped || r.diameter <= 0 || r.p < 3) continue;
    xs.push_back(std::log(std::log(static_cast<double>(r.p))));
    ys.push_back(std::log(static_cast<double>(r.diameter)));
  }
  PowerLogFit fit;
  fit.points = xs.size();
  if (xs.empty()) return fit;
  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = k * sxx - sx * sx;
  fit.b = xs.size() < 2 || denom == 0.0 ? 0.0 : (k * sxy - sx * sy) / denom;
  fit.a = std::exp((sy - fit.b * sx) / k);
  return fit;
}

}  // namespace apxgrp
