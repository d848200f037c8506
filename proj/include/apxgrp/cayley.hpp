#pragma once

// Cayley graphs Cay(<S>, S) with right multiplication x -> xs.

#include <cstdint>
#include <string>
#include <vector>

#include "apxgrp/common.hpp"
#include "apxgrp/ffmat.hpp"
#include "apxgrp/setops.hpp"

namespace apxgrp {

/// Symmetric generating set. The identity is dropped so the graph has no
/// loops.
class GenSet {
 public:
  /// Throws UsageError unless `generators` is symmetric.
  explicit GenSet(const MatSet& generators);

  const MatSet& generators() const { return gens_; }
  const Ambient& ambient() const { return gens_.ambient(); }
  std::size_t size() const { return gens_.size(); }

 private:
  MatSet gens_;
};

/// Vertex index of <S> plus one right-multiplication table per generator.
class CayleyGraph {
 public:
  static CayleyGraph build(const GenSet& s, const ExecOptions& opts = {});

  const MatSet& vertices() const { return vertices_; }
  std::size_t order() const { return vertices_.size(); }
  std::size_t degree() const { return degree_; }
  /// Index of vertices()[v] * s_j.
  std::uint32_t neighbor(std::size_t v, std::size_t j) const { return table_[v * degree_ + j]; }

 private:
  CayleyGraph(MatSet vertices, std::size_t degree, std::vector<std::uint32_t> table)
      : vertices_(std::move(vertices)), degree_(degree), table_(std::move(table)) {}

  MatSet vertices_;
  std::size_t degree_;
  std::vector<std::uint32_t> table_;
};

struct BfsStats {
  std::uint64_t group_order = 0;
  int diameter = 0;
  /// sphere_sizes[r] = number of elements at word distance r from id.
  std::vector<std::uint64_t> sphere_sizes;
};

struct SpectralOptions {
  std::uint64_t iteration_cap = 100'000;
  double residual_tolerance = 1e-8;
};

struct SpectralReport {
  std::uint32_t p = 0;
  int n = 0;
  std::uint64_t component_order = 0;
  /// <S> is all of SL_n(F_p).
  bool generated = false;
  double lambda2 = 0.0;
  double gap = 1.0;
  std::uint64_t iterations = 0;
  double residual = 0.0;
  bool converged = true;
};

/// <S>, by breadth-first closure.
MatSet generate_group(const GenSet& s, const ExecOptions& opts = {});

/// Sphere sizes from the identity. By vertex transitivity the eccentricity
/// of the identity is the diameter.
BfsStats diameter(const GenSet& s, const ExecOptions& opts = {});

/// Balls {x : |x|_S <= r}.
MatSet word_ball(const GenSet& s, int radius, const ExecOptions& opts = {});

/// Shortest nontrivial reduced cycle through the identity. An involution in
/// S counts as a 2-cycle; returns 0 when S is empty.
int girth(const GenSet& s, const ExecOptions& opts = {});

/// Second-largest eigenvalue of the normalised adjacency operator on <S>,
/// by power iteration on (A + I)/2 restricted to the complement of the
/// constant vector. Non-convergence is reported, not thrown.
SpectralReport spectral_gap(const GenSet& s, const SpectralOptions& sopts = {}, const ExecOptions& opts = {});

struct SweepRow {
  std::uint32_t p = 0;
  bool skipped = false;
  std::string note;
  std::uint64_t group_order = 0;
  int diameter = 0;
  int girth = 0;
  double lambda2 = 0.0;
  double gap = 0.0;
  bool generated = false;
  bool converged = true;
};

/// Reduces integer generators mod each p and measures the resulting graph.
std::vector<SweepRow> sweep(int n, const std::vector<IntMatrix>& generators, const std::vector<std::uint32_t>& primes,
                            const SpectralOptions& sopts = {}, const ExecOptions& opts = {});

/// Least-squares fit diameter(p) = a (log p)^b over non-skipped rows.
struct PowerLogFit {
  double a = 0.0;
  double b = 0.0;
  std::size_t points = 0;
};
PowerLogFit fit_diameter(const std::vector<SweepRow>& rows);

}  // namespace apxgrp
