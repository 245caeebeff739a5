#include <random>

#include "doctest.h"
#include "test_util.hpp"

using namespace ambikit;
using testutil::P;

TEST_SUITE("polyring") {

TEST_CASE("canonical text round-trips") {
  auto v = make_vars({"x", "y", "z"});
  for (const char* s : {"x^2 - y", "2*x*y - 1/3*z^3 + 7", "-x", "0", "1/2", "x*y*z - x^2 + y^2"}) {
    auto p = P(v, s);
    CHECK(P(v, p.to_string()) == p);
    CHECK(P(v, p.to_string()).to_string() == p.to_string());
  }
  CHECK(P(v, "y + x").to_string() == "x + y");
  CHECK(P(v, "(x - y)*(x + y)").to_string() == "x^2 - y^2");
  CHECK(P(v, "3/1*x^2").to_string() == "3*x^2");
  CHECK_THROWS_AS(P(v, "x + w"), ParseError);
  CHECK_THROWS_AS(P(v, "x +"), ParseError);
}

TEST_CASE("grevlex ordering") {
  auto v = make_vars({"x", "y", "z"});
  // grevlex: x*z > y^2 is false; y^2 > x*z (smaller last-variable exponent wins)
  CHECK(P(v, "x*z + y^2").to_string() == "y^2 + x*z");
  CHECK(P(v, "z + x^2").to_string() == "x^2 + z");
  CHECK(P(v, "z + y + x").to_string() == "x + y + z");
}

TEST_CASE("add and mul") {
  auto v = make_vars({"x", "y"});
  CHECK(add(P(v, "x + y"), P(v, "x - y")) == P(v, "2*x"));
  CHECK(add(P(v, "x^2"), P(v, "-x^2")).is_zero());
  auto p = P(v, "3*x*y - y^2 + 1/5");
  CHECK(add(p, Polynomial(v)) == p);
  CHECK(mul(P(v, "x - y"), P(v, "x + y")) == P(v, "x^2 - y^2"));
  CHECK(mul(p, Polynomial::constant(v, 1)) == p);
  CHECK(mul(p, Polynomial(v)).is_zero());
  auto w = make_vars({"x", "y"});
  auto other = make_vars({"a"});
  CHECK_NOTHROW(add(p, P(w, "x")));
  CHECK_THROWS_AS(add(p, P(other, "a")), VarTableMismatch);
  CHECK_THROWS_AS(mul(p, P(other, "a + 1")), VarTableMismatch);
}

TEST_CASE("ring axioms on random polynomials") {
  auto v = make_vars({"x", "y", "z", "w"});
  std::mt19937_64 rng(11);
  for (int it = 0; it < 60; ++it) {
    auto a = testutil::random_poly(v, rng, 5, 3);
    auto b = testutil::random_poly(v, rng, 4, 3);
    auto c = testutil::random_poly(v, rng, 3, 2);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK(a + b == b + a);
    CHECK((a - b) + b == a);
    if (!a.is_zero() && !b.is_zero()) CHECK((a * b).total_degree() == a.total_degree() + b.total_degree());
    CHECK(a.pow(3) == a * a * a);
  }
}

TEST_CASE("exact division") {
  auto v = make_vars({"x", "y", "z"});
  std::mt19937_64 rng(5);
  for (int it = 0; it < 60; ++it) {
    auto a = testutil::random_poly(v, rng, 5, 3);
    auto b = testutil::random_poly(v, rng, 4, 3);
    if (b.is_zero()) continue;
    auto q = divide_exact(a * b, b);
    REQUIRE(q);
    CHECK(*q == a);
  }
  CHECK_FALSE(divide_exact(P(v, "x^2 + 1"), P(v, "x + 1")));
  CHECK_FALSE(divide_exact(P(v, "x*y + 1"), P(v, "x")));
  CHECK_THROWS_AS(divide_exact(P(v, "x"), Polynomial(v)), DivisionByZero);
}

TEST_CASE("normalization") {
  auto v = make_vars({"x", "y"});
  CHECK(normalize(P(v, "-6*x + 4*y")) == P(v, "3*x - 2*y"));
  CHECK(normalize(P(v, "1/2*x + 1/3")) == P(v, "3*x + 2"));
  CHECK(content(P(v, "6*x + 4*y")) == 2);
  CHECK(primitive(P(v, "-6*x + 4*y")) == P(v, "-3*x + 2*y"));
}

TEST_CASE("gcd examples") {
  auto v = make_vars({"x", "y"});
  CHECK(gcd(P(v, "x^2 - y^2"), P(v, "x - y")) == P(v, "x - y"));
  // Oracle: content of the coefficient lists (6) and (4) is a unit over Q, the
  // monomial part is min(1, 2) = 1 power of x.
  CHECK(gcd(P(v, "6*x"), P(v, "4*x^2")) == P(v, "x"));
  auto p = P(v, "-4*x*y + 2");
  CHECK(gcd(p, Polynomial(v)) == normalize(p));
  CHECK(gcd(Polynomial(v), p) == normalize(p));
  CHECK(gcd(P(v, "x + 1"), P(v, "y + 1")) == P(v, "1"));
}

TEST_CASE("gcd properties on random inputs") {
  auto v = make_vars({"x", "y", "z"});
  std::mt19937_64 rng(7);
  for (int it = 0; it < 40; ++it) {
    auto p = testutil::random_poly(v, rng, 3, 2);
    auto q = testutil::random_poly(v, rng, 3, 2);
    auto g = testutil::random_poly(v, rng, 3, 2);
    if (p.is_zero() || q.is_zero() || g.is_zero()) continue;
    auto lhs = gcd(p * g, q * g);
    auto rhs = gcd(p, q) * g;
    CHECK(associates(lhs, rhs));
    CHECK(divide_exact(p * g, lhs));
    CHECK(divide_exact(q * g, lhs));
  }
}

TEST_CASE("evaluate and specialize") {
  auto v = make_vars({"x", "y"});
  Rational pt[] = {2, 3};
  CHECK(evaluate(P(v, "x^2 + y"), pt) == 7);
  CHECK(evaluate(Polynomial(v), pt) == 0);
  Rational half[] = {Rational(1, 2), -1};
  CHECK(evaluate(P(v, "4*x^3*y - y^2"), half) == Rational(-3, 2));
  std::pair<std::size_t, Rational> sx[] = {{0, Rational(2)}};
  CHECK(specialize(P(v, "x^2*y + x"), sx) == P(v, "4*y + 2"));

  auto s = make_vars({"s_1_1", "s_1_2", "s_1_3", "s_2_2", "s_2_3", "s_3_3"});
  std::vector<Rational> id = {1, 0, 0, 1, 0, 1};
  CHECK(evaluate(P(s, "s_1_3*s_2_2 - s_1_2*s_2_3"), id) == 0);
}

TEST_CASE("determinants and minors") {
  auto s = make_vars({"s_1_1", "s_1_2", "s_1_3", "s_2_2", "s_2_3", "s_3_3"});
  auto S3 = PolyMatrix::symmetric(s, "s", 3);
  std::size_t r2[] = {0, 1};
  CHECK(minor(S3, r2, r2) == P(s, "s_1_1*s_2_2 - s_1_2^2"));
  CHECK(determinant(PolyMatrix::identity(s, 3)) == P(s, "1"));
  CHECK(minor(S3, std::span<const std::size_t>{}, std::span<const std::size_t>{}) == P(s, "1"));
  // |S_{13|2}|: rows {1,2}, columns {3,2}; 2x2 expansion a*d - b*c.
  std::size_t rows[] = {0, 1}, cols[] = {2, 1};
  auto oracle = S3(0, 2) * S3(1, 1) - S3(0, 1) * S3(1, 2);
  CHECK(minor(S3, rows, cols) == oracle);
  CHECK(oracle == P(s, "s_1_3*s_2_2 - s_1_2*s_2_3"));
  std::size_t bad[] = {0, 5};
  CHECK_THROWS_AS(minor(S3, bad, rows), DimensionError);
  std::size_t one[] = {0};
  CHECK_THROWS_AS(minor(S3, one, rows), DimensionError);
  CHECK_THROWS_AS(determinant(PolyMatrix(s, 2, 3)), DimensionError);
}

TEST_CASE("Bareiss agrees with cofactor expansion") {
  auto v = make_vars({"a", "b", "c"});
  std::mt19937_64 rng(3);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int it = 0; it < 6; ++it) {
      PolyMatrix m(v, n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = testutil::random_poly(v, rng, 2, 1, 3);
      CHECK(bareiss_determinant(m) == cofactor_determinant(m));
    }
  }
}

TEST_CASE("adjugate identity") {
  auto s = make_vars({"s_1_1", "s_1_2", "s_1_3", "s_2_2", "s_2_3", "s_3_3"});
  auto S3 = PolyMatrix::symmetric(s, "s", 3);
  auto prod = S3 * adjugate(S3);
  auto d = determinant(S3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(prod(i, j) == (i == j ? d : Polynomial(s)));
  CHECK(adjugate(S3)(0, 1) == P(s, "s_1_3*s_2_3 - s_1_2*s_3_3"));
}

}
