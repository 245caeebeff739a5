#include <algorithm>

#include "ambikit/modelzoo.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace ambikit;
using testutil::P;

namespace {

GraphSpec undirected(std::size_t n, std::vector<VertexPair> edges) {
  GraphSpec g;
  g.n = n;
  for (auto [a, b] : edges) g.edges.push_back({a, b, EdgeKind::undirected});
  return g;
}

GraphSpec dag(std::size_t n, std::vector<VertexPair> edges) {
  GraphSpec g;
  g.n = n;
  for (auto [a, b] : edges) g.edges.push_back({a, b, EdgeKind::directed});
  return g;
}

std::vector<std::string> strings(const std::vector<Polynomial>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

std::vector<Rational> point(std::initializer_list<long> nums, long den = 1) {
  std::vector<Rational> out;
  for (long v : nums) {
    Rational r(v, den);
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_SUITE("modelzoo") {

TEST_CASE("concentration: 4-cycle") {
  ModelSpec m = build_concentration(undirected(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}}));
  CHECK(strings(m.eq_gens) == std::vector<std::string>{"k_1_3", "k_2_4"});
  CHECK(m.ineq_gens.size() == 15);
  CHECK(m.noneq_gens.size() == 15);
  CHECK(m.iso.full);
  CHECK(m.iso.model()->names().front() == "s_1_1");
  CHECK(verify_inverse(m.iso, true).ok);
}

TEST_CASE("concentration: colors and sign constraints") {
  GraphSpec g = undirected(3, {{1, 2}, {2, 3}});
  g.vertex_classes = {{1, 3}};
  g.edge_classes = {{{1, 2}, {2, 3}}};
  g.nonpositive_partials = true;
  ModelSpec m = build_concentration(g);
  CHECK(strings(m.eq_gens) == std::vector<std::string>{"k_1_3", "k_1_1 - k_3_3", "k_1_2 - k_2_3"});
  auto ineqs = strings(m.ineq_gens);
  CHECK(std::find(ineqs.begin(), ineqs.end(), "-k_1_2") != ineqs.end());
  CHECK(std::find(ineqs.begin(), ineqs.end(), "-k_2_3") != ineqs.end());
}

TEST_CASE("concentration: malformed graphs") {
  CHECK_THROWS_AS(build_concentration(undirected(3, {{1, 4}})), Error);
  CHECK_THROWS_AS(build_concentration(undirected(3, {{2, 2}})), Error);
  CHECK_THROWS_AS(build_concentration(dag(3, {{1, 2}})), Error);
  GraphSpec g = undirected(3, {{1, 2}});
  g.edge_classes = {{{1, 2}, {2, 3}}};
  CHECK_THROWS_AS(build_concentration(g), Error);
}

TEST_CASE("SEM: covariance of the complete 3-node DAG") {
  ModelSpec m = build_sem(dag(3, {{1, 2}, {1, 3}, {2, 3}}));
  const VarTablePtr& T = m.iso.params();
  // Sigma = (I - Lambda)^{-T} Omega (I - Lambda)^{-1}, entry by entry.
  CHECK(m.iso.alpha.components[0].num() == P(T, "w_1_1"));
  CHECK(m.iso.alpha.components[1].num() == P(T, "l_1_2*w_1_1"));
  CHECK(m.iso.alpha.components[3].num() == P(T, "l_1_2^2*w_1_1 + w_2_2"));
  CHECK(m.iso.alpha.components[2].num() == P(T, "l_1_3*w_1_1 + l_1_2*l_2_3*w_1_1"));
  CHECK(m.eq_gens.empty());
  CHECK(verify_inverse(m.iso, true).ok);
}

TEST_CASE("SEM: round trip at a point") {
  ModelSpec m = build_sem(dag(3, {{1, 2}, {2, 3}}));
  // Parameters in table order: w_1_1 w_2_2 w_3_3 l_1_2 l_1_3 l_2_3.
  std::vector<Rational> theta = point({2, 3, 5, 1, 0, -2});
  auto sigma = m.iso.alpha(theta);
  CHECK(m.iso.beta(sigma) == theta);
  CHECK(strings(m.eq_gens) == std::vector<std::string>{"l_1_3"});
}

TEST_CASE("SEM: labels must follow a topological order") {
  CHECK_THROWS_AS(build_sem(dag(3, {{2, 1}})), Error);
  CHECK_THROWS_AS(build_sem(undirected(3, {{1, 2}})), Error);
  GraphSpec g = dag(3, {{1, 2}});
  g.monotone = true;
  CHECK_THROWS_AS(build_sem(g), Error);
}

TEST_CASE("SEM: edge colors tie coefficients") {
  GraphSpec g = dag(3, {{1, 2}, {1, 3}, {2, 3}});
  g.edge_classes = {{{1, 2}, {1, 3}}};
  ModelSpec m = build_sem(g);
  CHECK(strings(m.eq_gens) == std::vector<std::string>{"l_1_2 - l_1_3"});
}

TEST_CASE("SEM: interventional copies") {
  GraphSpec g = dag(3, {{1, 2}, {2, 3}});
  g.interventions = {{2}};
  g.monotone = true;
  ModelSpec m = build_sem(g);
  CHECK(m.iso.model()->size() == 12);
  auto eqs = strings(m.eq_gens);
  // Untargeted mechanisms are shared between the copies.
  CHECK(std::find(eqs.begin(), eqs.end(), "-w_1_1 + w1_1_1") != eqs.end());
  CHECK(std::find(eqs.begin(), eqs.end(), "-l_2_3 + l1_2_3") != eqs.end());
  auto ineqs = strings(m.ineq_gens);
  CHECK(std::find(ineqs.begin(), ineqs.end(), "-w_2_2 + w1_2_2") != ineqs.end());
  CHECK(verify_inverse(m.iso, true).ok);
}

TEST_CASE("SEM: the confounded instance") {
  GraphSpec g = dag(4, {{1, 2}, {1, 3}, {2, 3}, {3, 4}});
  g.edges.push_back({2, 4, EdgeKind::bidirected});
  ModelSpec m = build_sem(g);
  CHECK(strings(m.eq_gens) == std::vector<std::string>{"l_1_4"});
  CHECK(verify_inverse(m.iso, true).ok);
  GraphSpec bad = g;
  bad.edges.push_back({1, 3, EdgeKind::bidirected});
  CHECK_THROWS_AS(build_sem(bad), Error);
}

TEST_CASE("SEM: leading minors have product images") {
  GraphSpec conf = dag(4, {{1, 2}, {1, 3}, {2, 3}, {3, 4}});
  conf.edges.push_back({2, 4, EdgeKind::bidirected});
  for (const ModelSpec& m : {build_sem(dag(3, {{1, 2}, {1, 3}, {2, 3}})), build_sem(dag(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}})),
                             build_sem(conf)}) {
    REQUIRE_FALSE(m.iso.known_phi.empty());
    for (const auto& [p, image] : m.iso.known_phi) {
      RationalFunction generic = m.iso.alpha.pullback(p, m.iso.Sbar);
      CHECK(image.num() * generic.den() == generic.num() * image.den());
    }
  }
}

TEST_CASE("staged tree: uniform shape") {
  StagedTreeSpec t = StagedTreeSpec::uniform({2, 3});
  CHECK(t.internal.size() == 3);
  CHECK(t.children("") == 2);
  CHECK(t.children("1") == 3);
  CHECK(t.children("12") == 0);
  CHECK(t.leaves() == std::vector<std::string>{"00", "01", "02", "10", "11", "12"});
}

TEST_CASE("staged tree: trivial tree") {
  ModelSpec m = build_staged_tree(StagedTreeSpec::uniform({2}));
  CHECK(m.iso.model()->names() == std::vector<std::string>{"p_0", "p_1"});
  CHECK(strings(m.eq_gens) == std::vector<std::string>{"tau - 1"});
  CHECK(verify_inverse(m.iso, true).ok);
}

TEST_CASE("staged tree: parameters are recovered from marginals") {
  StagedTreeSpec t = StagedTreeSpec::uniform({2, 2});
  t.stages = {{"0", "1"}};
  ModelSpec m = build_staged_tree(t);
  CHECK(m.iso.params()->names() == std::vector<std::string>{"t_0", "t_00", "t_10", "tau"});
  CHECK(strings(m.eq_gens) == std::vector<std::string>{"tau - 1", "t_00 - t_10"});
  // theta_0 = 1/4, theta_00 = theta_10 = 1/3, tau = 1.
  std::vector<Rational> theta{Rational(1, 4), Rational(1, 3), Rational(1, 3), Rational(1)};
  auto p = m.iso.alpha(theta);
  CHECK(p == std::vector<Rational>{Rational(1, 12), Rational(1, 6), Rational(1, 4), Rational(1, 2)});
  CHECK(m.iso.beta(p) == theta);
  CHECK(verify_inverse(m.iso, true).ok);
}

TEST_CASE("staged tree: invalid stagings") {
  StagedTreeSpec t = StagedTreeSpec::uniform({2, 3});
  t.stages = {{"", "1"}};
  CHECK_THROWS_AS(build_staged_tree(t), Error);  // out-degrees differ
  t.stages = {{"0", "7"}};
  CHECK_THROWS_AS(build_staged_tree(t), Error);  // not a vertex
  t.stages = {{"0", "1"}, {"1", "0"}};
  CHECK_THROWS_AS(build_staged_tree(t), Error);  // in two stages
}

TEST_CASE("staged tree: level order renames leaves") {
  StagedTreeSpec t = StagedTreeSpec::uniform({2, 2});
  t.levels = {"B", "A"};
  t.outcome_order = {"A", "B"};
  ModelSpec m = build_staged_tree(t);
  // Leaf 01 decides B = 0 then A = 1, so it is p_10.
  CHECK(m.iso.model()->names() == std::vector<std::string>{"p_00", "p_01", "p_10", "p_11"});
  std::vector<Rational> theta{Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(1)};
  auto p = m.iso.alpha(theta);
  // p_10 is the leaf 01: 1/4 * (1 - 1/3).
  CHECK(p[2] == Rational(1, 6));
}

TEST_CASE("lyapunov: stationary covariance") {
  ModelSpec m = build_lyapunov({});
  const VarTablePtr& T = m.iso.params();
  CHECK(T->names() == std::vector<std::string>{"m_1_1", "m_2_1", "m_3_1", "m_2_2", "m_3_2", "m_3_3"});
  // M = -I gives Sigma = I / 2.
  std::vector<Rational> drift = point({-1, 0, 0, -1, 0, -1});
  auto sigma = m.iso.alpha(drift);
  CHECK(sigma == point({1, 0, 0, 1, 0, 1}, 2));
  CHECK(m.iso.beta(sigma) == drift);
  // A lower-triangular drift: the Lyapunov equation holds entrywise.
  std::vector<Rational> M = point({-2, 1, 3, -1, -1, -3});
  auto s = m.iso.alpha(M);
  auto at = [&](std::size_t i, std::size_t j) { return s[m.iso.model()->index(sigma_name(std::min(i, j), std::max(i, j)))]; };
  Rational Md[3][3] = {{M[0], 0, 0}, {M[1], M[3], 0}, {M[2], M[4], M[5]}};
  for (std::size_t i = 1; i <= 3; ++i)
    for (std::size_t j = 1; j <= 3; ++j) {
      Rational v = 0;
      for (std::size_t k = 1; k <= 3; ++k) v += Md[i - 1][k - 1] * at(k, j) + at(i, k) * Md[j - 1][k - 1];
      CHECK(v == (i == j ? Rational(-1) : Rational(0)));
    }
  CHECK(verify_inverse(m.iso, true).ok);
}

TEST_CASE("lyapunov: Kronecker operator") {
  ModelSpec m = build_lyapunov({});
  PolyMatrix B = lyapunov_kronecker(m);
  CHECK(B.rows() == 9);
  CHECK(B.cols() == 9);
  const VarTablePtr& T = m.iso.params();
  CHECK(B(0, 0) == P(T, "2*m_1_1"));
  CHECK(B(4, 4) == P(T, "2*m_2_2"));
  CHECK(B(3, 0) == P(T, "m_2_1"));  // row (2,1), column (1,1)
}

TEST_CASE("lyapunov: invalid specifications") {
  LyapunovSpec l;
  l.n = 5;
  CHECK_THROWS_AS(build_lyapunov(l), Error);
  l = {};
  l.extra_eq = {"m_3_1^2"};
  CHECK_THROWS_AS(build_lyapunov(l), Error);
  l = {};
  l.support = {{1, 1}, {2, 2}, {3, 3}, {1, 2}, {2, 3}, {1, 3}};
  CHECK_THROWS_AS(build_lyapunov(l), Error);  // needs assert_positive
  l = {};
  l.C = {{Rational(1), Rational(1)}, {Rational(0), Rational(1)}};
  CHECK_THROWS_AS(build_lyapunov(l), Error);
}

}  // TEST_SUITE
