#pragma once

// Brute-force reference computations for the tests. Everything here uses
// plain integer arithmetic on row-major vectors and never calls into the
// library's arithmetic, product-set, or graph code.

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <vector>

namespace oracle {

using Mat = std::vector<std::int64_t>;  // row-major, entries in [0, p)

inline std::int64_t mod(std::int64_t v, std::int64_t p) { return ((v % p) + p) % p; }

inline Mat mul(const Mat& a, const Mat& b, int n, std::int64_t p) {
  Mat c(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::int64_t s = 0;
      for (int k = 0; k < n; ++k) s += a[i * n + k] * b[k * n + j];
      c[i * n + j] = mod(s, p);
    }
  return c;
}

inline Mat identity(int n) {
  Mat m(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) m[i * n + i] = 1;
  return m;
}

/// Every 2x2 matrix over F_p with ad - bc = 1.
inline std::vector<Mat> all_sl2(std::int64_t p) {
  std::vector<Mat> out;
  for (std::int64_t a = 0; a < p; ++a)
    for (std::int64_t b = 0; b < p; ++b)
      for (std::int64_t c = 0; c < p; ++c)
        for (std::int64_t d = 0; d < p; ++d)
          if (mod(a * d - b * c, p) == 1) out.push_back({a, b, c, d});
  return out;
}

inline std::int64_t order_of(const Mat& g, int n, std::int64_t p) {
  Mat x = g;
  std::int64_t k = 1;
  while (x != identity(n)) {
    x = mul(x, g, n, p);
    ++k;
  }
  return k;
}

/// Cayley graph on an explicit vertex list: adjacency by index.
struct Graph {
  std::vector<Mat> vertices;
  std::vector<std::vector<std::size_t>> adj;  // adj[v][j] = index of v * gens[j]
};

inline Graph cayley(const std::vector<Mat>& gens, int n, std::int64_t p) {
  Graph g;
  std::map<Mat, std::size_t> index;
  std::queue<Mat> todo;
  index[identity(n)] = 0;
  g.vertices.push_back(identity(n));
  todo.push(identity(n));
  while (!todo.empty()) {
    const Mat x = todo.front();
    todo.pop();
    for (const Mat& s : gens) {
      const Mat y = mul(x, s, n, p);
      if (!index.count(y)) {
        index[y] = g.vertices.size();
        g.vertices.push_back(y);
        todo.push(y);
      }
    }
  }
  g.adj.resize(g.vertices.size());
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    for (const Mat& s : gens) g.adj[v].push_back(index.at(mul(g.vertices[v], s, n, p)));
  return g;
}

/// Maximum over all sources of the BFS eccentricity.
inline int all_pairs_diameter(const Graph& g) {
  int diam = 0;
  for (std::size_t src = 0; src < g.vertices.size(); ++src) {
    std::vector<int> dist(g.vertices.size(), -1);
    std::queue<std::size_t> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : g.adj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          diam = std::max(diam, dist[v]);
          q.push(v);
        }
    }
  }
  return diam;
}

/// Length of the shortest nonempty reduced word over gens equal to the
/// identity, enumerating words level by level. inverse_of[j] is the index of
/// gens[j]^{-1}. Returns 0 if none up to max_len.
inline int reduced_word_girth(const std::vector<Mat>& gens, const std::vector<std::size_t>& inverse_of, int n,
                              std::int64_t p, int max_len) {
  struct Word {
    Mat value;
    std::size_t last;
  };
  std::vector<Word> level;
  for (std::size_t j = 0; j < gens.size(); ++j) level.push_back({gens[j], j});
  for (int len = 1; len <= max_len; ++len) {
    for (const Word& w : level)
      if (w.value == identity(n)) return len;
    std::vector<Word> next;
    for (const Word& w : level)
      for (std::size_t j = 0; j < gens.size(); ++j) {
        if (inverse_of[w.last] == j) continue;
        next.push_back({mul(w.value, gens[j], n, p), j});
      }
    level = std::move(next);
  }
  return 0;
}

/// {s_1 ... s_k : k <= r, s_i in S ∪ {id}} by direct word enumeration.
inline std::set<Mat> word_ball(const std::vector<Mat>& gens, int radius, int n, std::int64_t p) {
  std::set<Mat> ball{identity(n)};
  std::set<Mat> frontier = ball;
  for (int r = 0; r < radius; ++r) {
    std::set<Mat> next;
    for (const Mat& w : frontier)
      for (const Mat& s : gens) next.insert(mul(w, s, n, p));
    next.insert(frontier.begin(), frontier.end());
    frontier = next;
    ball.insert(next.begin(), next.end());
  }
  return ball;
}

}  // namespace oracle
