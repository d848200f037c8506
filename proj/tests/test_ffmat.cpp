#include <random>

#include "apxgrp/errors.hpp"
#include "apxgrp/ffmat.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace apxgrp;

namespace {

MatSL m2(const Ambient& amb, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return MatSL::from_rows(amb, {{a, b}, {c, d}});
}

MatSL random_element(const Ambient& amb, std::mt19937_64& rng) {
  std::vector<Residue> e(static_cast<std::size_t>(amb.entries()));
  for (;;) {
    for (auto& v : e) v = static_cast<Residue>(rng() % amb.p());
    const Residue det = determinant(amb.field(), amb.n(), e);
    if (det == 0) continue;
    const Residue s = amb.field().inv(det);
    for (int j = 0; j < amb.n(); ++j) e[static_cast<std::size_t>(j)] = amb.field().mul(e[static_cast<std::size_t>(j)], s);
    return MatSL::from_entries(amb, e);
  }
}

oracle::Mat as_oracle(const MatSL& m) { return oracle::Mat(m.entries().begin(), m.entries().end()); }

}  // namespace

TEST_CASE("prime field arithmetic") {
  const PrimeField f(7);
  CHECK(f.reduce(-1) == 6);
  CHECK(f.reduce(15) == 1);
  CHECK(f.add(5, 4) == 2);
  CHECK(f.sub(2, 5) == 4);
  CHECK(f.neg(0) == 0);
  CHECK(f.mul(3, 5) == 1);
  CHECK(f.pow(3, 6) == 1);
  for (Residue a = 1; a < 7; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
  CHECK_THROWS_AS(f.inv(0), UsageError);
  CHECK_THROWS_AS(PrimeField(9), UsageError);
  CHECK_THROWS_AS(PrimeField(1), UsageError);
}

TEST_CASE("ambient validation and group order") {
  CHECK(Ambient(2, 5).group_order() == 120);
  CHECK(Ambient(2, 101).group_order() == 101ull * (101 * 101 - 1));
  CHECK(Ambient(3, 2).group_order() == 168);
  CHECK(Ambient(3, 5).group_order() == 372000);
  CHECK_THROWS_AS(Ambient(1, 5), UsageError);
  CHECK_THROWS_AS(Ambient(5, 5), UsageError);
  CHECK_THROWS_AS(Ambient(2, 4), UsageError);
  // 16 entries of 17 bits do not fit a 64-bit key.
  CHECK_THROWS_AS(Ambient(4, 65537), UsageError);
}

TEST_CASE("construction checks determinant and shape") {
  const Ambient amb(2, 5);
  CHECK_THROWS_AS(m2(amb, 2, 0, 0, 2), UsageError);
  CHECK_THROWS_AS(MatSL::from_rows(amb, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), UsageError);
  CHECK_THROWS_AS(MatSL::from_rows(amb, {{1, 0}, {0}}), UsageError);
  const MatSL x = m2(amb, -1, 6, 0, -1);
  CHECK(x.rows() == IntMatrix{{4, 1}, {0, 4}});
  CHECK(x.to_string() == "[[4,1],[0,4]]");
}

TEST_CASE("keys are canonical and lexicographic") {
  const Ambient amb(2, 5);
  const auto all = oracle::all_sl2(5);
  MatKey prev = 0;
  bool first = true;
  for (const auto& e : all) {
    const MatSL m = m2(amb, e[0], e[1], e[2], e[3]);
    CHECK(MatSL::decode(amb, m.key()) == m);
    if (!first) CHECK(m.key() > prev);
    prev = m.key();
    first = false;
  }
}

TEST_CASE("mat_mul") {
  const Ambient amb(2, 5);
  const MatSL id = MatSL::identity(amb);
  CHECK(mat_mul(id, id) == id);
  CHECK(mat_mul(m2(amb, 1, 1, 0, 1), m2(amb, 1, 0, 1, 1)) == m2(amb, 2, 1, 1, 1));
  CHECK_THROWS_AS(mat_mul(id, MatSL::identity(Ambient(2, 7))), UsageError);
  CHECK_THROWS_AS(mat_mul(id, MatSL::identity(Ambient(3, 5))), UsageError);
}

TEST_CASE("mat_mul agrees with the oracle and is associative") {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 4; ++n) {
    const Ambient amb(n, 7);
    for (int t = 0; t < 50; ++t) {
      const MatSL a = random_element(amb, rng), b = random_element(amb, rng), c = random_element(amb, rng);
      const MatSL ab = mat_mul(a, b);
      CHECK(as_oracle(ab) == oracle::mul(as_oracle(a), as_oracle(b), n, 7));
      CHECK(mat_mul(ab, c) == mat_mul(a, mat_mul(b, c)));
      CHECK(determinant(amb.field(), n, ab.entries()) == 1);
    }
  }
}

TEST_CASE("mat_inv") {
  const Ambient amb(2, 11);
  CHECK(mat_inv(MatSL::identity(amb)) == MatSL::identity(amb));
  CHECK(mat_inv(m2(amb, 1, 1, 0, 1)) == m2(amb, 1, 10, 0, 1));
  std::mt19937_64 rng(11);
  const Ambient a7(2, 7);
  for (int t = 0; t < 100; ++t) {
    const MatSL g = random_element(a7, rng);
    CHECK(mat_mul(g, mat_inv(g)).is_identity());
  }
  const Ambient a3(3, 7);
  for (int t = 0; t < 20; ++t) {
    const MatSL g = random_element(a3, rng);
    CHECK(mat_mul(g, mat_inv(g)).is_identity());
    CHECK(mat_mul(mat_inv(g), g).is_identity());
  }
}

TEST_CASE("powers and orders") {
  const Ambient amb(2, 5);
  const MatSL t = m2(amb, 2, 0, 0, 3);
  CHECK(element_order(t) == 4);
  CHECK(mat_pow(t, 4).is_identity());
  CHECK(mat_pow(t, -1) == mat_inv(t));
  CHECK(mat_pow(t, 0).is_identity());
  CHECK(element_order(m2(amb, 1, 1, 0, 1)) == 5);
  CHECK(element_order(m2(amb, 4, 0, 0, 4)) == 2);
  for (const auto& e : oracle::all_sl2(5)) {
    const MatSL m = m2(amb, e[0], e[1], e[2], e[3]);
    CHECK(element_order(m) == static_cast<std::uint64_t>(oracle::order_of(e, 2, 5)));
  }
}

TEST_CASE("char_poly") {
  const Ambient amb(2, 5);
  CHECK(char_poly(MatSL::identity(amb)).coefficients() == std::vector<Residue>{1, 3, 1});  // x^2 - 2x + 1
  CHECK(char_poly(m2(amb, 2, 0, 0, 3)).coefficients() == std::vector<Residue>{1, 0, 1});  // x^2 + 1
  CHECK(char_poly(m2(amb, 1, 1, 0, 1)).coefficients() == std::vector<Residue>{1, 3, 1});
  // For n = 2 the polynomial is x^2 - tr x + 1.
  for (const auto& e : oracle::all_sl2(5)) {
    const MatSL m = m2(amb, e[0], e[1], e[2], e[3]);
    const Residue tr = static_cast<Residue>(oracle::mod(e[0] + e[3], 5));
    CHECK(char_poly(m).coefficients() == std::vector<Residue>{1, static_cast<Residue>((5 - tr) % 5), 1});
  }
  const Ambient a3(3, 7);
  CHECK(char_poly(MatSL::identity(a3)).coefficients() == std::vector<Residue>{1, 4, 3, 6});  // (x-1)^3
}

TEST_CASE("char_poly is a conjugation invariant") {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 4; ++n) {
    const Ambient amb(n, 11);
    for (int t = 0; t < 30; ++t) {
      const MatSL a = random_element(amb, rng), g = random_element(amb, rng);
      CHECK(char_poly(conjugate(g, a)) == char_poly(a));
    }
  }
}

TEST_CASE("is_regular_semisimple") {
  const Ambient amb(2, 5);
  CHECK_FALSE(is_regular_semisimple(MatSL::identity(amb)));
  CHECK_FALSE(is_regular_semisimple(m2(amb, 1, 1, 0, 1)));
  CHECK(is_regular_semisimple(m2(amb, 2, 0, 0, 3)));
  // In SL_2 with p odd: regular iff the discriminant tr^2 - 4 is nonzero.
  for (const auto& e : oracle::all_sl2(5)) {
    const MatSL m = m2(amb, e[0], e[1], e[2], e[3]);
    const std::int64_t tr = e[0] + e[3];
    CHECK(is_regular_semisimple(m) == (oracle::mod(tr * tr - 4, 5) != 0));
  }
  CHECK_THROWS_AS(is_regular_semisimple(MatSL::identity(Ambient(2, 2))), UnsupportedError);
  CHECK_THROWS_AS(is_regular_semisimple(MatSL::identity(Ambient(3, 3))), UnsupportedError);
  const Ambient a3(3, 5);
  CHECK(is_regular_semisimple(MatSL::from_rows(a3, {{1, 0, 0}, {0, 2, 0}, {0, 0, 3}})));
  CHECK_FALSE(is_regular_semisimple(MatSL::from_rows(a3, {{2, 0, 0}, {0, 2, 0}, {0, 0, 4}})));
}
