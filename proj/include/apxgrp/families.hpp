#pragma once

// Constructors for the sets and generating sets used in experiments.

#include <cstdint>
#include <string>
#include <vector>

#include "apxgrp/cayley.hpp"
#include "apxgrp/common.hpp"
#include "apxgrp/ffmat.hpp"
#include "apxgrp/setops.hpp"

namespace apxgrp {

/// {g^i : |i| <= n}
MatSet progression(const MatSL& g, std::int64_t n);

/// (S ∪ {id})^r
MatSet ball(const GenSet& s, int radius, const ExecOptions& opts = {});

/// Upper-triangular elements of SL_n(F_p), a solvable subgroup of order
/// p^{n(n-1)/2} (p-1)^{n-1}.
MatSet borel_subset(const Ambient& amb, const ExecOptions& opts = {});

/// Diagonal elements of SL_n(F_p), the split maximal torus, (p-1)^{n-1}.
MatSet diagonal_subgroup(const Ambient& amb, const ExecOptions& opts = {});

/// All of SL_n(F_p), generated from the elementary transvections.
MatSet full_group(const Ambient& amb, const ExecOptions& opts = {});

/// Elementary transvections I ± E_{i,i+1}, I ± E_{i+1,i}. For n = 2 these
/// are [[1,±1],[0,1]] and [[1,0],[±1,1]].
GenSet standard_unipotents(const Ambient& amb);

/// Exact integer determinant; throws UsageError on overflow.
std::int64_t integer_determinant(const IntMatrix& m);

/// Reduces integer matrices of determinant 1 mod p and symmetrises.
/// Throws UsageError when a matrix is malformed or det != 1 over Z.
GenSet reduce_mod_p(const std::vector<IntMatrix>& int_mats, const Ambient& amb);

/// `count` elements of SL_n(F_p) from a seeded generator, symmetrised.
/// A random invertible matrix has its first row scaled by det^{-1}.
GenSet random_generators(const Ambient& amb, int count, std::uint64_t seed);

enum class FamilyKind { kSubgroup, kProgression, kBall, kBorel, kModPReduction, kRandom };

const char* to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);

/// On-disk experiment vocabulary for the set A.
struct FamilySpec {
  FamilyKind kind = FamilyKind::kSubgroup;
  /// subgroup: "full", "diagonal", "borel" or "generated" (from `matrices`).
  std::string subgroup = "full";
  /// Generators (subgroup/ball/mod_p_reduction) or {g} (progression). An
  /// empty list means the standard unipotents for ball.
  std::vector<IntMatrix> matrices;
  std::int64_t length = 0;
  int radius = 1;
  int count = 2;
  std::uint64_t seed = 0;

  /// Throws UsageError on invalid parameters.
  void validate() const;
};

/// Builds the (symmetric, identity-containing) set described by `spec`.
MatSet build_family(const Ambient& amb, const FamilySpec& spec, const ExecOptions& opts = {});

}  // namespace apxgrp
