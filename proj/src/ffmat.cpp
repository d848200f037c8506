#include "apxgrp/ffmat.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "apxgrp/errors.hpp"

namespace apxgrp {

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p >= (1u << 31) || !is_prime(p)) {
    throw UsageError("modulus " + std::to_string(p) + " is not a prime below 2^31");
  }
}

Residue PrimeField::reduce(std::int64_t v) const {
  const std::int64_t m = static_cast<std::int64_t>(p_);
  std::int64_t r = v % m;
  if (r < 0) r += m;
  return static_cast<Residue>(r);
}

Residue PrimeField::pow(Residue a, std::uint64_t e) const {
  Residue result = 1 % p_;
  Residue base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Residue PrimeField::inv(Residue a) const {
  if (a % p_ == 0) throw UsageError("inverse of zero in F_" + std::to_string(p_));
  return pow(a, p_ - 2);
}

Ambient::Ambient(int n, std::uint32_t p) : n_(n), field_(p) {
  if (n < 2 || n > kMaxDim) {
    throw UsageError("dimension n=" + std::to_string(n) + " outside [2, " +
                     std::to_string(kMaxDim) + "]");
  }
  bits_ = static_cast<int>(std::bit_width(p - 1));
  if (n * n * bits_ > 64) {
    throw UsageError("SL_" + std::to_string(n) + "(F_" + std::to_string(p) +
                     ") elements do not fit a 64-bit key");
  }
}

std::uint64_t Ambient::group_order() const {
  const std::uint64_t p = this->p();
  std::uint64_t order = 1;
  for (int i = 0; i < n_ * (n_ - 1) / 2; ++i) order *= p;
  std::uint64_t pk = p;
  for (int k = 2; k <= n_; ++k) {
    pk *= p;
    order *= pk - 1;
  }
  return order;
}

MatSL MatSL::identity(const Ambient& amb) {
  MatSL m(amb);
  for (int i = 0; i < amb.n(); ++i) m.e_[static_cast<std::size_t>(i * amb.n() + i)] = 1;
  return m;
}

MatSL MatSL::from_rows(const Ambient& amb, const IntMatrix& rows) {
  const int n = amb.n();
  if (static_cast<int>(rows.size()) != n) {
    throw UsageError("matrix has " + std::to_string(rows.size()) + " rows, expected " +
                     std::to_string(n));
  }
  std::array<Residue, kMaxEntries> e{};
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n) {
      throw UsageError("matrix row " + std::to_string(i) + " has wrong length");
    }
    for (int j = 0; j < n; ++j) {
      e[static_cast<std::size_t>(i * n + j)] =
          amb.field().reduce(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
  return from_entries(amb, {e.data(), static_cast<std::size_t>(n * n)});
}

MatSL MatSL::from_entries(const Ambient& amb, std::span<const Residue> row_major) {
  if (static_cast<int>(row_major.size()) != amb.entries()) {
    throw UsageError("wrong number of matrix entries");
  }
  MatSL m(amb);
  for (std::size_t i = 0; i < row_major.size(); ++i) {
    if (row_major[i] >= amb.p()) throw UsageError("entry is not a canonical residue");
    m.e_[i] = row_major[i];
  }
  if (determinant(amb.field(), amb.n(), m.entries()) != 1) {
    throw UsageError("matrix " + m.to_string() + " does not have determinant 1 mod " +
                     std::to_string(amb.p()));
  }
  return m;
}

MatSL MatSL::decode(const Ambient& amb, MatKey key) {
  MatSL m(amb);
  const int bits = amb.bits_per_entry();
  const MatKey mask = (MatKey{1} << bits) - 1;
  for (int i = amb.entries() - 1; i >= 0; --i) {
    m.e_[static_cast<std::size_t>(i)] = static_cast<Residue>(key & mask);
    key >>= bits;
  }
  return m;
}

MatKey MatSL::key() const {
  MatKey k = 0;
  const int bits = amb_.bits_per_entry();
  for (int i = 0; i < amb_.entries(); ++i) k = (k << bits) | e_[static_cast<std::size_t>(i)];
  return k;
}

bool MatSL::is_identity() const {
  const int n = amb_.n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if ((*this)(i, j) != (i == j ? 1u : 0u)) return false;
    }
  }
  return true;
}

Residue MatSL::trace() const {
  Residue t = 0;
  for (int i = 0; i < amb_.n(); ++i) t = amb_.field().add(t, (*this)(i, i));
  return t;
}

IntMatrix MatSL::rows() const {
  const int n = amb_.n();
  IntMatrix out(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (*this)(i, j);
  }
  return out;
}

std::string MatSL::to_string() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < amb_.n(); ++i) {
    os << (i ? ",[" : "[");
    for (int j = 0; j < amb_.n(); ++j) os << (j ? "," : "") << (*this)(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

CharPoly::CharPoly(std::uint32_t p, std::vector<Residue> coefficients)
    : p_(p), coeffs_(std::move(coefficients)) {
  if (coeffs_.empty() || coeffs_.front() != 1) throw InvariantError("characteristic polynomial not monic");
}

std::string CharPoly::to_string() const {
  std::ostringstream os;
  const int d = degree();
  bool first = true;
  for (int i = 0; i <= d; ++i) {
    const Residue c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const int power = d - i;
    if (!first) os << " + ";
    first = false;
    if (c != 1 || power == 0) os << c;
    if (power >= 1) os << 'x';
    if (power >= 2) os << '^' << power;
  }
  if (first) os << '0';
  return os.str();
}

Residue determinant(const PrimeField& f, int n, std::span<const Residue> row_major) {
  std::array<Residue, kMaxEntries> m{};
  std::copy(row_major.begin(), row_major.end(), m.begin());
  auto at = [&](int i, int j) -> Residue& { return m[static_cast<std::size_t>(i * n + j)]; };
  Residue det = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && at(pivot, col) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(at(pivot, j), at(col, j));
      det = f.neg(det);
    }
    det = f.mul(det, at(col, col));
    const Residue inv = f.inv(at(col, col));
    for (int r = col + 1; r < n; ++r) {
      const Residue factor = f.mul(at(r, col), inv);
      if (factor == 0) continue;
      for (int j = col; j < n; ++j) at(r, j) = f.sub(at(r, j), f.mul(factor, at(col, j)));
    }
  }
  return det;
}

MatSL mat_mul(const MatSL& a, const MatSL& b) {
  if (!(a.amb_ == b.amb_)) throw UsageError("mat_mul: ambient mismatch");
  const int n = a.n();
  const std::uint64_t p = a.amb_.p();
  MatSL c(a.amb_);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::uint64_t acc = 0;
      // n <= 4 and residues < 2^31, so four products fit before reducing.
      for (int k = 0; k < n; ++k) {
        acc += static_cast<std::uint64_t>(a.e_[static_cast<std::size_t>(i * n + k)]) *
               b.e_[static_cast<std::size_t>(k * n + j)] % p;
      }
      c.e_[static_cast<std::size_t>(i * n + j)] = static_cast<Residue>(acc % p);
    }
  }
  return c;
}

MatSL mat_inv(const MatSL& a) {
  const int n = a.n();
  const PrimeField& f = a.amb_.field();
  std::array<Residue, kMaxEntries> m = a.e_;
  MatSL inv = MatSL::identity(a.amb_);
  auto at = [&](int i, int j) -> Residue& { return m[static_cast<std::size_t>(i * n + j)]; };
  auto out = [&](int i, int j) -> Residue& { return inv.e_[static_cast<std::size_t>(i * n + j)]; };
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && at(pivot, col) == 0) ++pivot;
    if (pivot == n) throw InvariantError("singular matrix in SL_n");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(at(pivot, j), at(col, j));
        std::swap(out(pivot, j), out(col, j));
      }
    }
    const Residue s = f.inv(at(col, col));
    for (int j = 0; j < n; ++j) {
      at(col, j) = f.mul(at(col, j), s);
      out(col, j) = f.mul(out(col, j), s);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || at(r, col) == 0) continue;
      const Residue factor = at(r, col);
      for (int j = 0; j < n; ++j) {
        at(r, j) = f.sub(at(r, j), f.mul(factor, at(col, j)));
        out(r, j) = f.sub(out(r, j), f.mul(factor, out(col, j)));
      }
    }
  }
  return inv;
}

MatSL conjugate(const MatSL& g, const MatSL& a) { return mat_mul(mat_mul(g, a), mat_inv(g)); }

bool commutes(const MatSL& a, const MatSL& b) { return mat_mul(a, b) == mat_mul(b, a); }

MatSL mat_pow(const MatSL& a, std::int64_t e) {
  MatSL base = e < 0 ? mat_inv(a) : a;
  std::uint64_t k = e < 0 ? static_cast<std::uint64_t>(-(e + 1)) + 1 : static_cast<std::uint64_t>(e);
  MatSL result = MatSL::identity(a.ambient());
  while (k > 0) {
    if (k & 1) result = mat_mul(result, base);
    base = mat_mul(base, base);
    k >>= 1;
  }
  return result;
}

std::uint64_t element_order(const MatSL& a) {
  MatSL x = a;
  std::uint64_t k = 1;
  while (!x.is_identity()) {
    x = mat_mul(x, a);
    ++k;
  }
  return k;
}

namespace {

// Polynomials over F_p, lowest degree first, no trailing zeros.
using Poly = std::vector<Residue>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const PrimeField& f, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = f.add(c[i + j], f.mul(a[i], b[j]));
  }
  trim(c);
  return c;
}

// Remainder of a modulo nonzero b.
Poly poly_mod(const PrimeField& f, Poly a, const Poly& b) {
  const Residue lead_inv = f.inv(b.back());
  while (a.size() >= b.size()) {
    const Residue factor = f.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = f.sub(a[shift + i], f.mul(factor, b[i]));
    }
    trim(a);
  }
  return a;
}

Poly poly_gcd(const PrimeField& f, Poly a, Poly b) {
  while (!b.empty()) {
    Poly r = poly_mod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

int permutation_sign(const std::array<int, kMaxDim>& perm, int n) {
  int inversions = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) inversions += perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)];
  }
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace

CharPoly char_poly(const MatSL& a) {
  // det(xI - a) by the Leibniz expansion with linear polynomial entries.
  // Division free, so valid in every characteristic; n <= 4 keeps it at
  // most 24 terms.
  const int n = a.n();
  const PrimeField& f = a.ambient().field();
  std::array<int, kMaxDim> perm{};
  std::iota(perm.begin(), perm.begin() + n, 0);
  Poly total(static_cast<std::size_t>(n + 1), 0);
  do {
    Poly term{1};
    for (int i = 0; i < n; ++i) {
      const int j = perm[static_cast<std::size_t>(i)];
      Poly entry = i == j ? Poly{f.neg(a(i, i)), 1} : Poly{f.neg(a(i, j))};
      trim(entry);
      term = poly_mul(f, term, entry);
      if (term.empty()) break;
    }
    const bool negate = permutation_sign(perm, n) < 0;
    for (std::size_t k = 0; k < term.size(); ++k) {
      total[k] = negate ? f.sub(total[k], term[k]) : f.add(total[k], term[k]);
    }
  } while (std::next_permutation(perm.begin(), perm.begin() + n));
  std::reverse(total.begin(), total.end());
  return CharPoly(f.modulus(), std::move(total));
}

bool is_regular_semisimple(const MatSL& a) {
  const int n = a.n();
  if (a.ambient().p() <= static_cast<std::uint32_t>(n)) {
    throw UnsupportedError("regular semisimplicity test needs p > n (p=" +
                           std::to_string(a.ambient().p()) + ", n=" + std::to_string(n) + ")");
  }
  const PrimeField& f = a.ambient().field();
  const CharPoly cp = char_poly(a);
  Poly poly(cp.coefficients().rbegin(), cp.coefficients().rend());
  Poly deriv(poly.size() - 1);
  for (std::size_t k = 1; k < poly.size(); ++k) deriv[k - 1] = f.mul(poly[k], f.reduce(static_cast<std::int64_t>(k)));
  trim(deriv);
  return poly_gcd(f, poly, deriv).size() == 1;
}

}  // namespace apxgrp
