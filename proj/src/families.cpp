#include "apxgrp/families.hpp"

#include <numeric>
#include <random>

#include "apxgrp/errors.hpp"

namespace apxgrp {

MatSet progression(const MatSL& g, std::int64_t n) {
  if (n < 0) throw UsageError("progression length must be >= 0");
  const MatSL g_inv = mat_inv(g);
  std::vector<MatKey> keys{MatSL::identity(g.ambient()).key()};
  MatSL up = MatSL::identity(g.ambient());
  MatSL down = up;
  for (std::int64_t i = 1; i <= n; ++i) {
    up = mat_mul(up, g);
    down = mat_mul(down, g_inv);
    // Powers repeat with period ord(g); once back at the identity the
    // whole cyclic group is present.
    if (up.is_identity()) break;
    keys.push_back(up.key());
    keys.push_back(down.key());
  }
  return MatSet::from_keys(g.ambient(), std::move(keys));
}

MatSet ball(const GenSet& s, int radius, const ExecOptions& opts) { return word_ball(s, radius, opts); }

namespace {

// Calls visit(entries) for every upper-triangular det-1 matrix; `diagonal_only`
// restricts to diagonal ones.
template <typename Visit>
void enumerate_triangular(const Ambient& amb, bool diagonal_only, Visit&& visit) {
  const int n = amb.n();
  const std::uint32_t p = amb.p();
  const PrimeField& f = amb.field();
  std::vector<std::pair<int, int>> free_slots;
  if (!diagonal_only) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) free_slots.emplace_back(i, j);
    }
  }
  std::vector<Residue> diag(static_cast<std::size_t>(n - 1), 1);
  std::vector<Residue> upper(free_slots.size(), 0);
  std::array<Residue, kMaxEntries> e{};
  auto advance = [](std::vector<Residue>& digits, Residue lo, Residue hi) {
    for (auto& d : digits) {
      if (++d < hi) return true;
      d = lo;
    }
    return false;
  };
  do {
    do {
      e.fill(0);
      Residue prod = 1;
      for (int i = 0; i < n - 1; ++i) {
        e[static_cast<std::size_t>(i * n + i)] = diag[static_cast<std::size_t>(i)];
        prod = f.mul(prod, diag[static_cast<std::size_t>(i)]);
      }
      e[static_cast<std::size_t>((n - 1) * n + n - 1)] = f.inv(prod);
      for (std::size_t k = 0; k < free_slots.size(); ++k) {
        e[static_cast<std::size_t>(free_slots[k].first * n + free_slots[k].second)] = upper[k];
      }
      visit(std::span<const Residue>(e.data(), static_cast<std::size_t>(n * n)));
    } while (advance(upper, 0, p));
  } while (advance(diag, 1, p));
}

MatSet triangular_set(const Ambient& amb, bool diagonal_only, const ExecOptions& opts) {
  std::vector<MatKey> keys;
  enumerate_triangular(amb, diagonal_only, [&](std::span<const Residue> e) {
    if (keys.size() >= opts.element_budget) throw ResourceError("family exceeds the element budget");
    keys.push_back(MatSL::from_entries(amb, e).key());
  });
  return MatSet::from_keys(amb, std::move(keys));
}

}  // namespace

MatSet borel_subset(const Ambient& amb, const ExecOptions& opts) { return triangular_set(amb, false, opts); }

MatSet diagonal_subgroup(const Ambient& amb, const ExecOptions& opts) { return triangular_set(amb, true, opts); }

MatSet full_group(const Ambient& amb, const ExecOptions& opts) {
  if (amb.group_order() > opts.element_budget) {
    throw ResourceError("|SL_n(F_p)| = " + std::to_string(amb.group_order()) + " exceeds the element budget");
  }
  return generate_group(standard_unipotents(amb), opts);
}

GenSet standard_unipotents(const Ambient& amb) {
  const int n = amb.n();
  std::vector<MatSL> gens;
  for (int i = 0; i + 1 < n; ++i) {
    for (const auto& [r, c] : {std::pair{i, i + 1}, std::pair{i + 1, i}}) {
      for (std::int64_t sign : {1, -1}) {
        IntMatrix m(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
        for (int k = 0; k < n; ++k) m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = 1;
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = sign;
        gens.push_back(MatSL::from_rows(amb, m));
      }
    }
  }
  return GenSet(MatSet::from_elements(amb, gens));
}

std::int64_t integer_determinant(const IntMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m) {
    if (row.size() != n) throw UsageError("integer matrix is not square");
  }
  if (n == 0 || n > static_cast<std::size_t>(kMaxDim)) throw UsageError("integer matrix has unsupported size");
  std::array<int, kMaxDim> perm{};
  std::iota(perm.begin(), perm.begin() + static_cast<long>(n), 0);
  __int128 total = 0;
  do {
    __int128 term = 1;
    for (std::size_t i = 0; i < n; ++i) {
      __int128 next;
      if (__builtin_mul_overflow(term, static_cast<__int128>(m[i][static_cast<std::size_t>(perm[i])]), &next)) {
        throw UsageError("integer determinant overflows");
      }
      term = next;
    }
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    if (__builtin_add_overflow(total, inversions % 2 ? -term : term, &total)) {
      throw UsageError("integer determinant overflows");
    }
  } while (std::next_permutation(perm.begin(), perm.begin() + static_cast<long>(n)));
  if (total > INT64_MAX || total < INT64_MIN) throw UsageError("integer determinant overflows");
  return static_cast<std::int64_t>(total);
}

GenSet reduce_mod_p(const std::vector<IntMatrix>& int_mats, const Ambient& amb) {
  std::vector<MatSL> gens;
  for (const IntMatrix& m : int_mats) {
    if (static_cast<int>(m.size()) != amb.n()) throw UsageError("generator has the wrong dimension");
    if (integer_determinant(m) != 1) throw UsageError("integer generator does not have determinant 1");
    gens.push_back(MatSL::from_rows(amb, m));
  }
  const MatSet s = symmetrize(MatSet::from_elements(amb, gens));
  return GenSet(s);
}

GenSet random_generators(const Ambient& amb, int count, std::uint64_t seed) {
  if (count < 1) throw UsageError("random generator count must be >= 1");
  std::mt19937_64 rng(seed);
  const PrimeField& f = amb.field();
  const int n = amb.n();
  std::vector<MatSL> gens;
  std::array<Residue, kMaxEntries> e{};
  while (static_cast<int>(gens.size()) < count) {
    for (int i = 0; i < n * n; ++i) e[static_cast<std::size_t>(i)] = static_cast<Residue>(rng() % amb.p());
    const Residue det = determinant(f, n, {e.data(), static_cast<std::size_t>(n * n)});
    if (det == 0) continue;
    const Residue scale = f.inv(det);
    for (int j = 0; j < n; ++j) e[static_cast<std::size_t>(j)] = f.mul(e[static_cast<std::size_t>(j)], scale);
    gens.push_back(MatSL::from_entries(amb, {e.data(), static_cast<std::size_t>(n * n)}));
  }
  return GenSet(symmetrize(MatSet::from_elements(amb, gens)));
}

const char* to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kSubgroup: return "subgroup";
    case FamilyKind::kProgression: return "progression";
    case FamilyKind::kBall: return "ball";
    case FamilyKind::kBorel: return "borel";
    case FamilyKind::kModPReduction: return "mod_p_reduction";
    case FamilyKind::kRandom: return "random";
  }
  return "unknown";
}

FamilyKind family_kind_from_string(const std::string& name) {
  for (FamilyKind k : {FamilyKind::kSubgroup, FamilyKind::kProgression, FamilyKind::kBall, FamilyKind::kBorel,
                       FamilyKind::kModPReduction, FamilyKind::kRandom}) {
    if (name == to_string(k)) return k;
  }
  throw UsageError("unknown family kind '" + name + "'");
}

void FamilySpec::validate() const {
  switch (kind) {
    case FamilyKind::kSubgroup:
      if (subgroup != "full" && subgroup != "diagonal" && subgroup != "borel" && subgroup != "generated") {
        throw UsageError("subgroup must be one of full, diagonal, borel, generated");
      }
      if (subgroup == "generated" && matrices.empty()) throw UsageError("generated subgroup needs matrices");
      break;
    case FamilyKind::kProgression:
      if (matrices.size() != 1) throw UsageError("progression needs exactly one matrix g");
      if (length < 0) throw UsageError("progression length N must be >= 0");
      break;
    case FamilyKind::kBall:
      if (radius < 0) throw UsageError("ball radius must be >= 0");
      break;
    case FamilyKind::kBorel:
      break;
    case FamilyKind::kModPReduction:
      if (matrices.empty()) throw UsageError("mod_p_reduction needs matrices");
      break;
    case FamilyKind::kRandom:
      if (count < 1) throw UsageError("random family needs count >= 1");
      break;
  }
  // A progression element only needs det = 1 mod p, checked when it is built.
  if (kind == FamilyKind::kProgression) return;
  for (const IntMatrix& m : matrices) {
    if (integer_determinant(m) != 1) throw UsageError("family matrices must have determinant 1 over Z");
  }
}

MatSet build_family(const Ambient& amb, const FamilySpec& spec, const ExecOptions& opts) {
  spec.validate();
  const MatSet identity = MatSet::singleton(MatSL::identity(amb));
  switch (spec.kind) {
    case FamilyKind::kSubgroup:
      if (spec.subgroup == "full") return full_group(amb, opts);
      if (spec.subgroup == "diagonal") return diagonal_subgroup(amb, opts);
      if (spec.subgroup == "borel") return borel_subset(amb, opts);
      return generate_group(reduce_mod_p(spec.matrices, amb), opts);
    case FamilyKind::kProgression:
      return progression(MatSL::from_rows(amb, spec.matrices.front()), spec.length);
    case FamilyKind::kBall: {
      const GenSet s = spec.matrices.empty() ? standard_unipotents(amb) : reduce_mod_p(spec.matrices, amb);
      return ball(s, spec.radius, opts);
    }
    case FamilyKind::kBorel:
      return borel_subset(amb, opts);
    case FamilyKind::kModPReduction:
      return set_union(reduce_mod_p(spec.matrices, amb).generators(), identity);
    case FamilyKind::kRandom:
      return set_union(random_generators(amb, spec.count, spec.seed).generators(), identity);
  }
  throw InvariantError("unhandled family kind");
}

}  // namespace apxgrp
