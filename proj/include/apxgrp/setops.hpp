#pragma once

// Finite subsets of SL_n(F_p), product sets and approximate-group
// certificates.

#include <optional>
#include <span>
#include <vector>

#include "apxgrp/common.hpp"
#include "apxgrp/ffmat.hpp"

namespace apxgrp {

/// Immutable deduplicated set of matrices, stored as sorted canonical keys.
class MatSet {
 public:
  explicit MatSet(const Ambient& amb) : amb_(amb) {}
  static MatSet from_keys(const Ambient& amb, std::vector<MatKey> keys);
  static MatSet from_elements(const Ambient& amb, std::span<const MatSL> elements);
  static MatSet singleton(const MatSL& x);

  const Ambient& ambient() const { return amb_; }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }

  bool contains_key(MatKey key) const;
  bool contains(const MatSL& x) const;
  /// Position of `key` in keys(), or size() when absent.
  std::size_t index_of(MatKey key) const;

  /// Sorted ascending.
  std::span<const MatKey> keys() const { return keys_; }
  MatSL element(std::size_t i) const { return MatSL::decode(amb_, keys_[i]); }
  std::vector<MatSL> elements() const;

  bool contains_identity() const;
  /// x in A implies x^{-1} in A.
  bool is_symmetric() const;

  bool operator==(const MatSet& o) const { return amb_ == o.amb_ && keys_ == o.keys_; }

 private:
  MatSet(const Ambient& amb, std::vector<MatKey> sorted_unique) : amb_(amb), keys_(std::move(sorted_unique)) {}

  Ambient amb_;
  std::vector<MatKey> keys_;
};

MatSet set_union(const MatSet& a, const MatSet& b);
/// {g x g^{-1} : x in s}
MatSet conjugate_set(const MatSet& s, const MatSL& g);
/// {x^{-1} : x in s}
MatSet inverse_set(const MatSet& s);

/// Exact product set {xy : x in a, y in b}. Throws ResourceError when the
/// result exceeds opts.element_budget.
MatSet product(const MatSet& a, const MatSet& b, const ExecOptions& opts = {});

/// Exact k-fold product set A^k, k >= 1.
MatSet power_set(const MatSet& a, int k, const ExecOptions& opts = {});

/// a ∪ a^{-1} ∪ {id}
MatSet symmetrize(const MatSet& a);

/// The subgroup generated by `gens` (closure under products, always
/// containing the identity). Throws ResourceError past the budget.
MatSet closure(const MatSet& gens, const ExecOptions& opts = {});

/// True iff the nonempty set `g` is closed under products (hence a group).
bool is_group(const MatSet& g, const ExecOptions& opts = {});

struct GrowthReport {
  std::size_t size1 = 0;
  std::size_t size2 = 0;
  std::size_t size3 = 0;
  Ratio doubling;
  Ratio tripling;
  /// Size of the greedy covering set; an upper bound on the optimal K.
  std::optional<std::size_t> greedy_k;
};

/// |A|, |A^2|, |A^3| and their ratios. `a` must be symmetric and contain the
/// identity (UsageError otherwise).
GrowthReport growth_report(const MatSet& a, bool with_certificate = false, const ExecOptions& opts = {});

/// Symmetric X with A·A ⊆ X·A, and the bound K = |X|.
struct ControlWitness {
  MatSet x;
  Ratio k;
};

/// Greedy cover of A·A by translates xA, x ranging over symmetric pairs
/// {x, x^{-1}} ⊆ A·A. Pairs are ranked by newly covered elements per added
/// element; ties go to the identity, then to the lowest canonical key. The
/// result is re-verified before it is returned.
ControlWitness certify_approximate(const MatSet& a, const ExecOptions& opts = {});

/// A·A ⊆ X·A, checked element by element.
bool verify_cover(const MatSet& a, const MatSet& x, const ExecOptions& opts = {});

/// True iff |B| <= k|A|, |X| <= k and A ⊆ (X·B) ∩ (B·X).
bool verify_control(const MatSet& a, const MatSet& b, const MatSet& x, Ratio k);

}  // namespace apxgrp
