#include <random>

#include "ambikit/groebner.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace ambikit;
using testutil::P;

namespace {

GroebnerBasis gb(const VarTablePtr& v, std::vector<std::string> gens, TermOrder o = {}) {
  std::vector<Polynomial> ps;
  for (auto& s : gens) ps.push_back(P(v, s));
  return buchberger(IdealGens(v, ps, o));
}

IdealGens ideal(const VarTablePtr& v, std::vector<std::string> gens) {
  std::vector<Polynomial> ps;
  for (auto& s : gens) ps.push_back(P(v, s));
  return IdealGens(v, ps);
}

std::vector<std::string> strings(const GroebnerBasis& G) {
  std::vector<std::string> out;
  for (const auto& g : G.basis) out.push_back(g.to_string());
  return out;
}

// I : f^infinity by iterating single quotients until they stabilize.
GroebnerBasis iterated_quotient(const IdealGens& I, const Polynomial& f) {
  GroebnerBasis cur = buchberger(I);
  while (true) {
    GroebnerBasis next = quotient(cur.ideal(), f);
    if (next.basis == cur.basis) return cur;
    cur = next;
  }
}

std::vector<Polynomial> random_ideal(const VarTablePtr& v, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 3);
  std::vector<Polynomial> gens;
  int k = count(rng);
  while (static_cast<int>(gens.size()) < k) {
    auto p = testutil::random_poly(v, rng, 3, 3, 3);
    if (!p.is_zero() && !p.is_constant()) gens.push_back(p);
  }
  return gens;
}

}  // namespace

TEST_SUITE("groebner") {

TEST_CASE("term orders") {
  auto v = make_vars({"x", "y", "z"});
  auto m = [&](const char* s) { return P(v, s).leading_monomial(); };
  CHECK(TermOrder::lex().compare(m("x"), m("y^5")) > 0);
  CHECK(TermOrder::grevlex().compare(m("x"), m("y^5")) < 0);
  CHECK(TermOrder::grevlex().compare(m("y^2"), m("x*z")) > 0);
  CHECK(TermOrder::block(1).compare(m("x"), m("y^3*z^4")) > 0);
  CHECK(TermOrder::block(1).compare(m("x*y"), m("x*z^2")) < 0);
  TermOrder w = TermOrder::grevlex();
  w.weights = {1, 1, 3};
  CHECK(w.compare(m("z"), m("x^2")) > 0);
  CHECK(w.degree(m("x*z^2")) == 7);
}

TEST_CASE("normal form") {
  auto v = make_vars({"x", "y"});
  auto G = gb(v, {"x"});
  CHECK(normal_form(P(v, "x^2"), G).is_zero());
  CHECK(normal_form(P(v, "y"), G) == P(v, "y"));
  CHECK(normal_form(P(v, "3*x*y + 1/2*y^2 - 1"), G) == P(v, "1/2*y^2 - 1"));
  auto s = make_vars({"s_1_1", "s_1_2", "s_1_3", "s_2_2", "s_2_3", "s_3_3"});
  auto f = P(s, "s_1_3*s_2_2 - s_1_2*s_2_3");
  CHECK(normal_form(f, buchberger(IdealGens(s, {f}))).is_zero());
}

TEST_CASE("buchberger examples") {
  auto v = make_vars({"x", "y"});
  auto G = gb(v, {"x^2 - y", "y - 1"}, TermOrder::lex());
  // By hand: y - 1 reduces x^2 - y to x^2 - 1; S(x^2 - 1, y - 1) reduces to 0.
  CHECK(strings(G) == std::vector<std::string>{"y - 1", "x^2 - 1"});
  CHECK(is_groebner(G));
  CHECK(strings(gb(v, {"x"})) == std::vector<std::string>{"x"});
  CHECK(strings(gb(v, {"-4*x^2*y + 6*y"})) == std::vector<std::string>{"2*x^2*y - 3*y"});
  CHECK(gb(v, {"x", "x + 1"}).is_unit());
  CHECK(gb(v, {}).basis.empty());
}

TEST_CASE("cyclic-4 and textbook bases") {
  auto v = make_vars({"a", "b", "c", "d"});
  auto G = gb(v, {"a + b + c + d", "a*b + b*c + c*d + d*a", "a*b*c + b*c*d + c*d*a + d*a*b", "a*b*c*d - 1"});
  CHECK(is_groebner(G));
  CHECK(G.basis.size() == 7);  // reduced grevlex basis of cyclic-4 has 7 elements
  auto w = make_vars({"x", "y", "z"});
  auto L = gb(w, {"x^2 + y^2 + z^2 - 1", "x - y", "y - z^2"}, TermOrder::lex());
  CHECK(is_groebner(L));
  CHECK(L.basis.front().to_string() == "2*z^4 + z^2 - 1");
}

TEST_CASE("membership matches random combinations") {
  auto v = make_vars({"x", "y", "z"});
  std::mt19937_64 rng(21);
  for (int it = 0; it < 20; ++it) {
    auto gens = random_ideal(v, rng);
    auto G = buchberger(IdealGens(v, gens));
    REQUIRE(is_groebner(G));
    Polynomial comb(v);
    for (const auto& g : gens) comb += g * testutil::random_poly(v, rng, 2, 2, 4);
    CHECK(contains(G, comb));
    for (const auto& g : gens) CHECK(contains(G, g));
    for (const auto& b : G.basis) CHECK(normal_form(b, G).is_zero());
    // Normal form is a canonical remainder: f and f + comb agree.
    auto f = testutil::random_poly(v, rng, 3, 3);
    CHECK(normal_form(f, G) == normal_form(f + comb, G));
  }
}

TEST_CASE("saturation examples") {
  auto v = make_vars({"x", "y"});
  CHECK(strings(saturate(ideal(v, {"x*y"}), P(v, "x"))) == std::vector<std::string>{"y"});
  CHECK(strings(saturate(ideal(v, {"y"}), P(v, "x"))) == std::vector<std::string>{"y"});
  // x^2 is in <x^2, x*y>, so saturating at x gives the unit ideal (the
  // iterated-quotient oracle agrees). Saturating at y leaves <x>.
  auto I = ideal(v, {"x^2", "x*y"});
  CHECK(saturate(I, P(v, "x")).is_unit());
  CHECK(iterated_quotient(I, P(v, "x")).is_unit());
  CHECK(strings(quotient(I, P(v, "x"))) == std::vector<std::string>{"y", "x"});
  CHECK(strings(saturate(I, P(v, "y"))) == std::vector<std::string>{"x"});
  CHECK(saturate(IdealGens(v, {}), P(v, "x")).basis.empty());

  MonoidGens one({P(v, "x")});
  CHECK(saturate_monoid(ideal(v, {"x*y"}), one).basis == saturate(ideal(v, {"x*y"}), P(v, "x")).basis);

  auto s = make_vars({"s_1_1", "s_1_2", "s_1_3", "s_2_2", "s_2_3", "s_3_3"});
  auto prime = IdealGens(s, {P(s, "s_1_3*s_2_2 - s_1_2*s_2_3")});
  MonoidGens S({P(s, "s_1_1"), P(s, "s_1_1*s_2_2 - s_1_2^2")});
  CHECK(saturate_monoid(prime, S).basis == buchberger(prime).basis);
}

TEST_CASE("saturation agrees with iterated quotients") {
  auto v = make_vars({"x", "y", "z"});
  std::mt19937_64 rng(77);
  for (int it = 0; it < 15; ++it) {
    auto gens = random_ideal(v, rng);
    auto f = testutil::random_poly(v, rng, 2, 2, 3);
    if (f.is_zero()) continue;
    auto I = IdealGens(v, gens);
    CHECK(saturate(I, f).basis == iterated_quotient(I, f).basis);
  }
}

TEST_CASE("homogeneous saturation matches the auxiliary-variable method") {
  auto v = make_vars({"x", "y", "z", "w"});
  std::mt19937_64 rng(5);
  auto homog = [&](int deg, int terms) {
    Polynomial p(v);
    for (int t = 0; t < terms; ++t) {
      auto q = testutil::random_poly(v, rng, 1, deg, 4);
      if (q.is_zero() || q.total_degree() != static_cast<unsigned>(deg)) continue;
      p += q;
    }
    return p;
  };
  int checked = 0;
  for (int it = 0; it < 20; ++it) {
    std::vector<Polynomial> gens;
    for (int k = 0; k < 3; ++k) gens.push_back(homog(2, 3) * homog(1, 2));
    auto f = homog(1, 2);
    if (f.is_zero()) continue;
    auto I = IdealGens(v, gens);
    if (I.gens.empty()) continue;
    CHECK(saturate(I, f).basis == saturate_rabinowitsch(I, f).basis);
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("elimination") {
  auto v = make_vars({"x", "y"});
  std::string drop_x[] = {"x"};
  auto E = eliminate(ideal(v, {"x - y^2"}), drop_x);
  CHECK(E.basis.empty());
  CHECK(E.vars->names() == std::vector<std::string>{"y"});
  auto w = make_vars({"x", "y", "z"});
  auto C = eliminate(ideal(w, {"y - x^2", "z - x^3"}), drop_x);
  REQUIRE(C.basis.size() == 1);
  auto yz = make_vars({"y", "z"});
  CHECK(associates(C.basis[0].embed(yz), P(yz, "z^2 - y^3")));
  auto G = eliminate(ideal(w, {"x*y - z", "y^2"}), std::span<const std::string>{});
  CHECK(G.basis == buchberger(ideal(w, {"x*y - z", "y^2"})).basis);
}

TEST_CASE("ideal equality") {
  auto v = make_vars({"x", "y"});
  CHECK(ideal_equal(ideal(v, {"x", "y"}), ideal(v, {"x + y", "x - y"})));
  CHECK_FALSE(ideal_equal(ideal(v, {"x"}), ideal(v, {"x^2"})));
}

TEST_CASE("krull dimension") {
  auto v = make_vars({"x", "y", "z"});
  CHECK(krull_dimension(gb(v, {"x*y"})) == 2);
  CHECK(krull_dimension(gb(v, {"x", "y"})) == 1);
  CHECK(krull_dimension(gb(v, {"x", "y", "z"})) == 0);
  CHECK(krull_dimension(gb(v, {})) == 3);
  CHECK(krull_dimension(gb(v, {"x", "x - 1"})) == -1);
}

TEST_CASE("cancellation") {
  auto v = make_vars({"a", "b", "c", "d"});
  auto token = CancelToken::after(std::chrono::seconds(0));
  CHECK_THROWS_AS(buchberger(ideal(v, {"a + b + c + d", "a*b + b*c + c*d + d*a", "a*b*c*d - 1"}), token), Cancelled);
}

}
