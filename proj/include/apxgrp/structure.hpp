#pragma once

// Maximal tori, conjugacy classes and intersection-exponent measurements
// for subsets of SL_n(F_p).
//
// A maximal torus is represented by a regular semisimple anchor a; its
// points are the centraliser Z(a), so membership is a commuting test. Two
// regular semisimple elements lie on the same torus iff they commute, and
// then both generate the same matrix algebra F_p[a] = span{1, a, ..., a^{n-1}}.
// The reduced echelon basis of that algebra is the canonical TorusId.

#include <array>
#include <variant>
#include <vector>

#include "apxgrp/common.hpp"
#include "apxgrp/ffmat.hpp"
#include "apxgrp/setops.hpp"

namespace apxgrp {

/// Reduced row echelon basis of F_p[a], one packed row per basis vector.
using TorusId = std::array<MatKey, kMaxDim>;

class TorusHandle {
 public:
  /// Throws UsageError unless `anchor` is regular semisimple.
  explicit TorusHandle(const MatSL& anchor);

  const MatSL& anchor() const { return anchor_; }
  bool contains(const MatSL& x) const { return commutes(x, anchor_); }
  const TorusId& id() const { return id_; }

 private:
  MatSL anchor_;
  TorusId id_;
};

/// The conjugacy class of a regular semisimple element, identified by its
/// characteristic polynomial.
class ConjClassHandle {
 public:
  /// Throws UsageError unless `anchor` is regular semisimple.
  explicit ConjClassHandle(const MatSL& anchor);

  const CharPoly& anchor_charpoly() const { return charpoly_; }
  bool contains(const MatSL& x) const;

 private:
  CharPoly charpoly_;
};

TorusId torus_id(const MatSL& regular_semisimple);

enum class VarietyKind { kTorus, kDeficient, kConjClass };
const char* to_string(VarietyKind kind);

struct LPReport {
  VarietyKind variety_kind = VarietyKind::kTorus;
  int m = 1;
  std::size_t count = 0;
  std::size_t set_size = 0;
  /// log(count) / log|A|; 0 when count <= 1.
  double measured_exponent = 0.0;
  /// dim V / dim G.
  double predicted_exponent = 0.0;
};

struct InvarianceViolation {
  MatSL torus_anchor;
  MatSL conjugator;
};

struct InvolvedCount {
  std::size_t m = 0;
  std::size_t set_size = 0;
  /// log m / log|A|, 0 when m == 0.
  double measured_exponent = 0.0;
  /// n / (n + 1)
  double bound_exponent = 0.0;
};

/// {x in s : xa = ax}
MatSet centralizer_in(const MatSet& s, const MatSL& a);

/// {g a g^{-1} : g in group}
MatSet conjugation_orbit(const MatSet& group, const MatSL& a);

/// Both arguments must be regular semisimple (UsageError otherwise).
bool same_torus(const MatSL& a, const MatSL& b);

std::size_t torus_intersection(const MatSet& a, int m, const TorusHandle& t, const ExecOptions& opts = {});

/// Elements of A^m ∩ T that are not regular semisimple.
std::size_t deficient_count(const MatSet& a, int m, const TorusHandle& t, const ExecOptions& opts = {});

std::size_t conj_class_intersection(const MatSet& a, int m, const ConjClassHandle& c, const ExecOptions& opts = {});

using Variety = std::variant<TorusHandle, ConjClassHandle>;

/// Measured versus predicted exponent of |A^m ∩ V| in |A|. Reports only.
LPReport lp_exponent(const MatSet& a, int m, const Variety& v, const ExecOptions& opts = {});
/// Same for the non-regular part of a torus, whose dimension is n - 2.
LPReport lp_exponent_deficient(const MatSet& a, int m, const TorusHandle& t, const ExecOptions& opts = {});

/// One handle per maximal torus meeting A^2 in a regular semisimple element.
/// Each anchor is the lowest-key such element; the list is sorted by anchor.
std::vector<TorusHandle> enumerate_involved_tori(const MatSet& a, const ExecOptions& opts = {});

/// Pairs (T, g) with T involved but g^{-1} T g not involved.
std::vector<InvarianceViolation> check_conjugation_invariance(const MatSet& a, const MatSet& conjugators,
                                                              const ExecOptions& opts = {});

InvolvedCount count_involved_vs_bound(const MatSet& a, const ExecOptions& opts = {});

/// Exact fraction of regular semisimple elements in A^k.
Ratio regular_proportion(const MatSet& a, int k, const ExecOptions& opts = {});

/// |N_G(T)| / |T ∩ G| for a finite group G (UsageError if g is not closed).
std::size_t weyl_order(const MatSet& g, const TorusHandle& t, const ExecOptions& opts = {});

}  // namespace apxgrp
