#pragma once

// Exact arithmetic over the prime field F_p and over SL_n(F_p).
//
// Matrices are small (n <= 4) and stored inline. Every matrix has a
// canonical 64-bit key: the row-major tuple of residues packed most
// significant entry first, so numeric key order is lexicographic order of
// the tuple. The key is the identity of a matrix for hashing, equality and
// set membership everywhere in the library.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace apxgrp {

using Residue = std::uint32_t;
using MatKey = std::uint64_t;
using IntMatrix = std::vector<std::vector<std::int64_t>>;

inline constexpr int kMaxDim = 4;
inline constexpr int kMaxEntries = kMaxDim * kMaxDim;

bool is_prime(std::uint64_t v);

/// Arithmetic in F_p on canonical residues in [0, p).
class PrimeField {
 public:
  /// Throws UsageError unless p is a prime below 2^31.
  explicit PrimeField(std::uint32_t p);

  std::uint32_t modulus() const { return p_; }

  Residue reduce(std::int64_t v) const;
  Residue add(Residue a, Residue b) const {
    const std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const {
    return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % p_);
  }
  Residue pow(Residue a, std::uint64_t e) const;
  /// Multiplicative inverse; throws UsageError for 0.
  Residue inv(Residue a) const;

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint32_t p_;
};

/// The ambient group SL_n(F_p): dimension, field and the key layout.
class Ambient {
 public:
  /// Throws UsageError unless 2 <= n <= kMaxDim, p is prime, and the n*n
  /// residues fit into a 64-bit key.
  Ambient(int n, std::uint32_t p);

  int n() const { return n_; }
  int entries() const { return n_ * n_; }
  std::uint32_t p() const { return field_.modulus(); }
  const PrimeField& field() const { return field_; }
  int bits_per_entry() const { return bits_; }

  /// |SL_n(F_p)| = p^{n(n-1)/2} prod_{k=2..n} (p^k - 1).
  std::uint64_t group_order() const;

  bool operator==(const Ambient& o) const { return n_ == o.n_ && field_ == o.field_; }

 private:
  int n_;
  PrimeField field_;
  int bits_;
};

/// An element of SL_n(F_p). Construction checks det = 1.
class MatSL {
 public:
  static MatSL identity(const Ambient& amb);
  /// Reduces integer entries mod p; throws UsageError on a shape mismatch
  /// or when the reduced determinant is not 1.
  static MatSL from_rows(const Ambient& amb, const IntMatrix& rows);
  static MatSL from_entries(const Ambient& amb, std::span<const Residue> row_major);
  /// Inverse of key(). Keys must come from a matrix of the same ambient.
  static MatSL decode(const Ambient& amb, MatKey key);

  const Ambient& ambient() const { return amb_; }
  int n() const { return amb_.n(); }
  Residue operator()(int i, int j) const { return e_[static_cast<std::size_t>(i * amb_.n() + j)]; }
  std::span<const Residue> entries() const {
    return {e_.data(), static_cast<std::size_t>(amb_.entries())};
  }
  MatKey key() const;
  bool is_identity() const;
  Residue trace() const;
  IntMatrix rows() const;
  std::string to_string() const;

  bool operator==(const MatSL& o) const { return amb_ == o.amb_ && key() == o.key(); }

 private:
  friend MatSL mat_mul(const MatSL&, const MatSL&);
  friend MatSL mat_inv(const MatSL&);
  explicit MatSL(const Ambient& amb) : amb_(amb) {}

  Ambient amb_;
  std::array<Residue, kMaxEntries> e_{};
};

/// Monic characteristic polynomial det(xI - a), highest degree first.
class CharPoly {
 public:
  CharPoly(std::uint32_t p, std::vector<Residue> coefficients);

  std::uint32_t p() const { return p_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  /// coefficients()[0] = 1 is the x^n coefficient; back() is the constant.
  const std::vector<Residue>& coefficients() const { return coeffs_; }
  std::string to_string() const;

  bool operator==(const CharPoly&) const = default;

 private:
  std::uint32_t p_;
  std::vector<Residue> coeffs_;
};

/// Determinant of an n x n row-major matrix over F_p.
Residue determinant(const PrimeField& f, int n, std::span<const Residue> row_major);

MatSL mat_mul(const MatSL& a, const MatSL& b);
MatSL mat_inv(const MatSL& a);
/// g a g^{-1}
MatSL conjugate(const MatSL& g, const MatSL& a);
bool commutes(const MatSL& a, const MatSL& b);
/// a^e for any signed exponent.
MatSL mat_pow(const MatSL& a, std::int64_t e);
/// Multiplicative order of a (smallest k >= 1 with a^k = id).
std::uint64_t element_order(const MatSL& a);

CharPoly char_poly(const MatSL& a);

/// Distinct eigenvalues over the algebraic closure, tested as
/// gcd(f, f') = 1 for f the characteristic polynomial.
/// Throws UnsupportedError when p <= n.
bool is_regular_semisimple(const MatSL& a);

}  // namespace apxgrp
