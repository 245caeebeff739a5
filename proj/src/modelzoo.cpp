#include "ambikit/modelzoo.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace ambikit {

void ModelSpec::add_eq(Polynomial p, std::string why) {
  eq_gens.push_back(std::move(p));
  eq_labels.push_back(std::move(why));
}

void ModelSpec::add_ineq(Polynomial p, std::string why) {
  ineq_gens.push_back(std::move(p));
  ineq_labels.push_back(std::move(why));
}

void ModelSpec::add_noneq(Polynomial p, std::string why) {
  noneq_gens.push_back(std::move(p));
  noneq_labels.push_back(std::move(why));
}

bool ModelSpec::linear_equations() const {
  return std::all_of(eq_gens.begin(), eq_gens.end(), [](const Polynomial& p) { return p.total_degree() <= 1; });
}

bool GraphSpec::has_edge(std::size_t i, std::size_t j, EdgeKind kind) const {
  for (const auto& e : edges) {
    if (e.kind != kind) continue;
    if (e.a == i && e.b == j) return true;
    if (kind != EdgeKind::directed && e.a == j && e.b == i) return true;
  }
  return false;
}

std::vector<std::size_t> GraphSpec::parents(std::size_t j) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges)
    if (e.kind == EdgeKind::directed && e.b == j) out.push_back(e.a);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

StagedTreeSpec StagedTreeSpec::uniform(const std::vector<std::size_t>& arities) {
  StagedTreeSpec t;
  std::vector<std::string> level{""};
  for (std::size_t r : arities) {
    std::vector<std::string> next;
    for (const auto& v : level) {
      t.internal.emplace_back(v, r);
      for (std::size_t k = 0; k < r; ++k) next.push_back(v + static_cast<char>('0' + k));
    }
    level = std::move(next);
  }
  return t;
}

std::size_t StagedTreeSpec::children(const std::string& v) const {
  for (const auto& [w, k] : internal)
    if (w == v) return k;
  return 0;
}

std::vector<std::string> StagedTreeSpec::leaves() const {
  std::vector<std::string> out;
  std::vector<std::string> stack{""};
  while (!stack.empty()) {
    std::string v = stack.back();
    stack.pop_back();
    std::size_t k = children(v);
    if (k == 0) {
      out.push_back(v);
      continue;
    }
    for (std::size_t c = k; c-- > 0;) stack.push_back(v + static_cast<char>('0' + c));
  }
  return out;
}

std::string sigma_name(std::size_t i, std::size_t j, const std::string& prefix) {
  if (i > j) std::swap(i, j);
  return prefix + "_" + std::to_string(i) + "_" + std::to_string(j);
}

Polynomial conditional_minor(const PolyMatrix& m, std::size_t i, std::size_t j, const std::vector<std::size_t>& C) {
  std::vector<std::size_t> rows{i}, cols{j};
  rows.insert(rows.end(), C.begin(), C.end());
  cols.insert(cols.end(), C.begin(), C.end());
  return minor(m, rows, cols);
}

Polynomial leading_minor(const PolyMatrix& m, std::size_t k) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  return minor(m, idx, idx);
}

namespace {

std::vector<std::string> symmetric_names(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j) out.push_back(sigma_name(i, j, prefix));
  return out;
}

std::string copy_prefix(const std::string& base, std::size_t copy) {
  return copy == 0 ? base : base + std::to_string(copy);
}

void check_vertex(const GraphSpec& g, std::size_t v) {
  if (v < 1 || v > g.n) throw Error("graph: vertex " + std::to_string(v) + " out of range 1.." + std::to_string(g.n));
}

void check_graph(const GraphSpec& g) {
  if (g.n == 0) throw Error("graph: no vertices");
  if (g.n > 6) throw Error("graph: at most 6 vertices are supported");
  for (const auto& e : g.edges) {
    check_vertex(g, e.a);
    check_vertex(g, e.b);
    if (e.a == e.b) throw Error("graph: self-loop at vertex " + std::to_string(e.a));
  }
  for (const auto& cls : g.vertex_classes)
    for (auto v : cls) check_vertex(g, v);
  for (const auto& cls : g.edge_classes)
    for (auto [a, b] : cls) {
      check_vertex(g, a);
      check_vertex(g, b);
    }
  for (const auto& I : g.interventions)
    for (auto v : I) check_vertex(g, v);
}

Polynomial var(const VarTablePtr& vars, const std::string& name) { return Polynomial::variable(vars, name); }

// The sign of a generator is chosen so that it is positive at `point`.
Polynomial positive_at(const Polynomial& p, std::span<const Rational> point) {
  Rational v = evaluate(p, point);
  if (v == 0) throw Error("reference point lies on the monoid generator " + p.to_string());
  return v > 0 ? p : -p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Concentration models

ModelSpec build_concentration(const GraphSpec& g) {
  check_graph(g);
  for (const auto& e : g.edges)
    if (e.kind != EdgeKind::undirected) throw Error("concentration model: only undirected edges are allowed");
  if (!g.interventions.empty()) throw Error("concentration model: interventions are not supported");
  const std::size_t n = g.n;
  VarTablePtr K = make_vars(symmetric_names("k", n));
  VarTablePtr S = make_vars(symmetric_names("s", n));
  PolyMatrix Km = PolyMatrix::symmetric(K, "k", n);
  PolyMatrix Sm = PolyMatrix::symmetric(S, "s", n);
  Polynomial dK = determinant(Km), dS = determinant(Sm);
  PolyMatrix aK = adjugate(Km), aS = adjugate(Sm);

  ModelSpec m;
  m.label = "concentration";
  m.iso.alpha = {K, S, {}};
  m.iso.beta = {S, K, {}};
  m.iso.S = MonoidGens({dS});
  m.iso.Sbar = MonoidGens({dK});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      m.iso.alpha.components.push_back(RationalFunction::reduce(aK(i, j), dK, m.iso.Sbar));
      m.iso.beta.components.push_back(RationalFunction::reduce(aS(i, j), dS, m.iso.S));
    }

  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j)
      if (!g.has_edge(i, j, EdgeKind::undirected))
        m.add_eq(var(K, sigma_name(i, j, "k")), "missing edge " + std::to_string(i) + "-" + std::to_string(j));
  for (const auto& cls : g.vertex_classes)
    for (std::size_t t = 1; t < cls.size(); ++t)
      m.add_eq(var(K, sigma_name(cls[0], cls[0], "k")) - var(K, sigma_name(cls[t], cls[t], "k")),
               "vertex color " + std::to_string(cls[0]) + "~" + std::to_string(cls[t]));
  for (const auto& cls : g.edge_classes)
    for (std::size_t t = 1; t < cls.size(); ++t) {
      for (auto [a, b] : {cls[0], cls[t]})
        if (!g.has_edge(a, b, EdgeKind::undirected))
          throw Error("colored edge " + std::to_string(a) + "-" + std::to_string(b) + " is not in the graph");
      m.add_eq(var(K, sigma_name(cls[0].first, cls[0].second, "k")) -
                   var(K, sigma_name(cls[t].first, cls[t].second, "k")),
               "edge color " + std::to_string(cls[0].first) + std::to_string(cls[0].second) + "~" +
                   std::to_string(cls[t].first) + std::to_string(cls[t].second));
    }
  // Positive definiteness: every principal minor non-negative and non-zero.
  for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
    std::vector<std::size_t> I;
    std::string name;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t(1) << i)) {
        I.push_back(i);
        name += std::to_string(i + 1);
      }
    Polynomial d = minor(Km, I, I);
    m.add_ineq(d, "|K_" + name + "|");
    m.add_noneq(d, "|K_" + name + "|");
    // Jacobi: |(S^-1)_I| = |S_{I^c}| / |S|.
    std::vector<std::size_t> Ic;
    for (std::size_t i = 0; i < n; ++i)
      if (!(mask & (std::size_t(1) << i))) Ic.push_back(i);
    m.iso.known_psi.emplace_back(d, RationalFunction::reduce(minor(Sm, Ic, Ic), dS, m.iso.S));
  }
  m.iso.known_phi.emplace_back(dS, RationalFunction::reduce(Polynomial::constant(K, 1), dK));
  if (g.nonpositive_partials)
    for (const auto& e : g.edges)
      m.add_ineq(-var(K, sigma_name(e.a, e.b, "k")), "k_" + std::to_string(std::min(e.a, e.b)) + "_" +
                                                        std::to_string(std::max(e.a, e.b)) + " <= 0");

  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j)
      m.boxes.push_back(i == j ? SampleBox{1, static_cast<long>(10 * n), 4} : SampleBox{});
  m.iso = extend_to_full(std::move(m.iso));
  return m;
}

// ---------------------------------------------------------------------------
// Structural equation models

namespace {

// Sigma = (I - Lambda)^{-T} Omega (I - Lambda)^{-1} as polynomials.
PolyMatrix sem_covariance(const PolyMatrix& Omega, const PolyMatrix& Lambda) {
  const std::size_t n = Omega.rows();
  const VarTablePtr& vars = Omega.vars();
  PolyMatrix U = PolyMatrix::identity(vars, n);
  PolyMatrix power = PolyMatrix::identity(vars, n);
  for (std::size_t k = 1; k < n; ++k) {
    power = power * Lambda;
    U = U + power;
  }
  return U.transpose() * Omega * U;
}

std::vector<std::size_t> range_without(std::size_t upto, std::size_t skip) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < upto; ++k)
    if (k != skip) out.push_back(k);
  return out;
}

struct SemCopy {
  std::string w, l, s;  // variable prefixes
};

// The confounded four-node instance with the bidirected edge 2<->4.
ModelSpec build_confounded(const GraphSpec& g) {
  const std::size_t n = 4;
  if (g.n != n || !g.has_edge(2, 4, EdgeKind::bidirected))
    throw Error("mixed graphs: only the four-node instance with the bidirected edge 2<->4 is built in");
  const std::vector<VertexPair> allowed{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {3, 4}};
  for (const auto& e : g.edges) {
    if (e.kind == EdgeKind::undirected) throw Error("SEM: undirected edge in a mixed graph");
    if (e.kind == EdgeKind::bidirected && !((e.a == 2 && e.b == 4) || (e.a == 4 && e.b == 2)))
      throw Error("mixed graphs: only the bidirected edge 2<->4 is supported");
    if (e.kind == EdgeKind::directed && std::find(allowed.begin(), allowed.end(), VertexPair{e.a, e.b}) == allowed.end())
      throw Error("mixed graphs: directed edge " + std::to_string(e.a) + "->" + std::to_string(e.b) +
                  " is outside the identified instance");
  }
  if (!g.interventions.empty() || !g.vertex_classes.empty() || !g.edge_classes.empty())
    throw Error("mixed graphs: colorings and interventions are not supported");

  std::vector<std::string> pnames{"w_1_1", "w_2_2", "w_3_3", "w_4_4", "w_2_4"};
  for (auto [a, b] : allowed) pnames.push_back(sigma_name(a, b, "l"));
  VarTablePtr P = make_vars(pnames);
  VarTablePtr S = make_vars(symmetric_names("s", n));
  PolyMatrix Omega(P, n, n), Lambda(P, n, n);
  for (std::size_t i = 0; i < n; ++i) Omega(i, i) = var(P, sigma_name(i + 1, i + 1, "w"));
  Omega(1, 3) = Omega(3, 1) = var(P, "w_2_4");
  for (auto [a, b] : allowed) Lambda(a - 1, b - 1) = var(P, sigma_name(a, b, "l"));
  PolyMatrix Sigma = sem_covariance(Omega, Lambda);
  PolyMatrix Sm = PolyMatrix::symmetric(S, "s", n);

  ModelSpec m;
  m.label = "sem";
  m.iso.alpha = {P, S, {}};
  m.iso.beta = {S, P, {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m.iso.alpha.components.emplace_back(Sigma(i, j));

  Polynomial d1 = leading_minor(Sm, 1), d2 = leading_minor(Sm, 2), d3 = leading_minor(Sm, 3), d4 = leading_minor(Sm, 4);
  m.iso.S = MonoidGens({d1, d2, d3, d4});
  Polynomial w22 = var(P, "w_2_2"), w44 = var(P, "w_4_4"), w24 = var(P, "w_2_4");
  m.iso.Sbar = MonoidGens({var(P, "w_1_1"), w22, var(P, "w_3_3"), w22 * w44 - w24 * w24});
  Polynomial w11 = var(P, "w_1_1"), w33 = var(P, "w_3_3");
  m.iso.known_phi.emplace_back(d1, RationalFunction(w11));
  m.iso.known_phi.emplace_back(d2, RationalFunction(w11 * w22));
  m.iso.known_phi.emplace_back(d3, RationalFunction(w11 * w22 * w33));
  m.iso.known_phi.emplace_back(d4, RationalFunction(w11 * w33 * (w22 * w44 - w24 * w24)));

  auto R = [&](const Polynomial& num, const Polynomial& den) {
    return RationalFunction::reduce(num, den, m.iso.S);
  };
  // 0-based helpers for |Sigma_{ij|C}|.
  auto cm = [&](std::size_t i, std::size_t j, std::vector<std::size_t> C) { return conditional_minor(Sm, i, j, C); };
  Polynomial c24_13 = cm(1, 3, {0, 2});
  RationalFunction w44_img = R(d4, d3) + R(d2 * c24_13 * c24_13, d1 * d3 * d3);
  RationalFunction w24_img = R(d2 * c24_13, d1 * d3);
  RationalFunction l14_img = R(cm(0, 3, {1, 2}), d3) + R(cm(0, 1, {}) * c24_13, d1 * d3);
  m.iso.beta.components = {
      R(d1, Polynomial::constant(S, 1)),
      R(d2, d1),
      R(d3, d2),
      w44_img,
      w24_img,
      R(cm(0, 1, {}), d1),
      R(cm(0, 2, {1}), d2),
      l14_img,
      R(cm(1, 2, {0}), d2),
      R(cm(2, 3, {0, 1}), d3),
  };
  for (auto [a, b] : allowed)
    if (!g.has_edge(a, b, EdgeKind::directed))
      m.add_eq(var(P, sigma_name(a, b, "l")), "missing edge " + std::to_string(a) + "->" + std::to_string(b));
  for (std::size_t i = 0; i < 4; ++i) m.boxes.push_back({1, 10, 4});
  m.boxes.push_back({});
  for (std::size_t k = 0; k < allowed.size(); ++k) m.boxes.push_back({});
  m.iso = extend_to_full(std::move(m.iso));
  return m;
}

}  // namespace

ModelSpec build_sem(const GraphSpec& g) {
  check_graph(g);
  bool mixed = false;
  for (const auto& e : g.edges) {
    if (e.kind == EdgeKind::undirected) throw Error("SEM: undirected edge " + std::to_string(e.a) + "-" + std::to_string(e.b));
    if (e.kind == EdgeKind::bidirected) mixed = true;
    if (e.kind == EdgeKind::directed && e.a > e.b)
      throw Error("SEM: vertices must be labeled in topological order (edge " + std::to_string(e.a) + "->" +
                  std::to_string(e.b) + ")");
  }
  if (mixed) return build_confounded(g);
  if (g.monotone && g.interventions.empty()) throw Error("SEM: monotone interventions need intervention targets");

  const std::size_t n = g.n;
  const std::size_t copies = g.interventions.size() + 1;
  std::vector<SemCopy> pre;
  for (std::size_t c = 0; c < copies; ++c) pre.push_back({copy_prefix("w", c), copy_prefix("l", c), copy_prefix("s", c)});

  std::vector<std::string> pnames, snames;
  for (const auto& p : pre) {
    for (std::size_t i = 1; i <= n; ++i) pnames.push_back(sigma_name(i, i, p.w));
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = i + 1; j <= n; ++j) pnames.push_back(sigma_name(i, j, p.l));
    for (const auto& s : symmetric_names(p.s, n)) snames.push_back(s);
  }
  VarTablePtr P = make_vars(pnames);
  VarTablePtr S = make_vars(snames);

  ModelSpec m;
  m.label = copies > 1 ? "sem-interventional" : "sem";
  m.iso.alpha = {P, S, {}};
  m.iso.beta = {S, P, {}};
  std::vector<Polynomial> Sgens, Sbar_gens;
  for (const auto& p : pre) {
    PolyMatrix Omega(P, n, n), Lambda(P, n, n);
    for (std::size_t i = 0; i < n; ++i) Omega(i, i) = var(P, sigma_name(i + 1, i + 1, p.w));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) Lambda(i, j) = var(P, sigma_name(i + 1, j + 1, p.l));
    PolyMatrix Sigma = sem_covariance(Omega, Lambda);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) m.iso.alpha.components.emplace_back(Sigma(i, j));
    for (std::size_t i = 0; i < n; ++i) Sbar_gens.push_back(Omega(i, i));
  }
  std::vector<PolyMatrix> Sms;
  for (const auto& p : pre) {
    Sms.push_back(PolyMatrix::symmetric(S, p.s, n));
    for (std::size_t k = 1; k <= n; ++k) Sgens.push_back(leading_minor(Sms.back(), k));
  }
  m.iso.S = MonoidGens(Sgens);
  m.iso.Sbar = MonoidGens(Sbar_gens);
  // The leading block of Sigma is U^T Omega U with U unit triangular, so
  // |Sigma_[k]| = omega_11 ... omega_kk.
  for (std::size_t c = 0; c < copies; ++c) {
    Polynomial prod = Polynomial::constant(P, 1);
    for (std::size_t k = 1; k <= n; ++k) {
      prod *= var(P, sigma_name(k, k, pre[c].w));
      m.iso.known_phi.emplace_back(leading_minor(Sms[c], k), RationalFunction(prod));
    }
  }
  for (std::size_t c = 0; c < copies; ++c) {
    const PolyMatrix& Sm = Sms[c];
    for (std::size_t i = 0; i < n; ++i)
      m.iso.beta.components.push_back(RationalFunction::reduce(leading_minor(Sm, i + 1), leading_minor(Sm, i), m.iso.S));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        m.iso.beta.components.push_back(
            RationalFunction::reduce(conditional_minor(Sm, i, j, range_without(j, i)), leading_minor(Sm, j), m.iso.S));
  }

  auto w = [&](std::size_t c, std::size_t i) { return var(P, sigma_name(i, i, pre[c].w)); };
  auto l = [&](std::size_t c, std::size_t i, std::size_t j) { return var(P, sigma_name(i, j, pre[c].l)); };
  auto tag = [&](std::size_t c, const std::string& what) {
    return copies > 1 ? what + " (copy " + std::to_string(c) + ")" : what;
  };
  for (std::size_t c = 0; c < copies; ++c) {
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = i + 1; j <= n; ++j)
        if (!g.has_edge(i, j, EdgeKind::directed))
          m.add_eq(l(c, i, j), tag(c, "missing edge " + std::to_string(i) + "->" + std::to_string(j)));
    for (const auto& cls : g.vertex_classes)
      for (std::size_t t = 1; t < cls.size(); ++t)
        m.add_eq(w(c, cls[0]) - w(c, cls[t]),
                 tag(c, "vertex color " + std::to_string(cls[0]) + "~" + std::to_string(cls[t])));
    for (const auto& cls : g.edge_classes)
      for (std::size_t t = 1; t < cls.size(); ++t) {
        for (auto [a, b] : {cls[0], cls[t]})
          if (!g.has_edge(a, b, EdgeKind::directed))
            throw Error("colored edge " + std::to_string(a) + "->" + std::to_string(b) + " is not in the graph");
        m.add_eq(l(c, cls[0].first, cls[0].second) - l(c, cls[t].first, cls[t].second),
                 tag(c, "edge color " + std::to_string(cls[0].first) + std::to_string(cls[0].second) + "~" +
                            std::to_string(cls[t].first) + std::to_string(cls[t].second)));
      }
  }
  for (std::size_t c = 1; c < copies; ++c) {
    const auto& I = g.interventions[c - 1];
    for (std::size_t i = 1; i <= n; ++i) {
      bool targeted = std::find(I.begin(), I.end(), i) != I.end();
      if (targeted) {
        if (g.monotone)
          m.add_ineq(w(c, i) - w(0, i), "monotone intervention at " + std::to_string(i) + " (copy " +
                                            std::to_string(c) + ")");
        continue;
      }
      m.add_eq(w(c, i) - w(0, i), "untargeted variance " + std::to_string(i) + " (copy " + std::to_string(c) + ")");
      for (auto j : g.parents(i))
        m.add_eq(l(c, j, i) - l(0, j, i),
                 "untargeted edge " + std::to_string(j) + "->" + std::to_string(i) + " (copy " + std::to_string(c) + ")");
    }
  }
  for (std::size_t c = 0; c < copies; ++c) {
    for (std::size_t i = 0; i < n; ++i) m.boxes.push_back({1, 10, 4});
    for (std::size_t k = 0; k < n * (n - 1) / 2; ++k) m.boxes.push_back({});
  }
  m.iso = extend_to_full(std::move(m.iso));
  return m;
}

// ---------------------------------------------------------------------------
// Staged trees

ModelSpec build_staged_tree(const StagedTreeSpec& t) {
  std::map<std::string, std::size_t> arity;
  for (const auto& [v, k] : t.internal) {
    if (k < 2) throw Error("staged tree: vertex '" + v + "' must have at least two children");
    if (k > 10) throw Error("staged tree: at most ten children per vertex");
    if (!arity.emplace(v, k).second) throw Error("staged tree: vertex '" + v + "' listed twice");
    for (char ch : v)
      if (ch < '0' || ch > '9') throw Error("staged tree: vertex words consist of digits");
  }
  if (!arity.count("")) throw Error("staged tree: the root (empty word) must be internal");
  for (const auto& [v, k] : arity) {
    if (v.empty()) continue;
    auto parent = arity.find(v.substr(0, v.size() - 1));
    if (parent == arity.end() || static_cast<std::size_t>(v.back() - '0') >= parent->second)
      throw Error("staged tree: vertex '" + v + "' has no parent");
  }
  std::set<std::string> staged;
  for (const auto& stage : t.stages)
    for (const auto& v : stage) {
      auto it = arity.find(v);
      if (it == arity.end()) throw Error("staged tree: stage member '" + v + "' is not an internal vertex");
      if (it->second != arity.at(stage.front()))
        throw Error("staged tree: stage members '" + stage.front() + "' and '" + v + "' differ in out-degree");
      if (!staged.insert(v).second) throw Error("staged tree: vertex '" + v + "' is in two stages");
    }

  std::vector<std::string> leaves = t.leaves();
  // Leaf -> model coordinate name, in outcome order when levels are given.
  std::map<std::string, std::string> leaf_name;
  if (t.levels.empty() != t.outcome_order.empty())
    throw Error("staged tree: levels and outcome_order must be given together");
  std::vector<std::size_t> perm;
  if (!t.levels.empty()) {
    if (t.levels.size() != t.outcome_order.size()) throw Error("staged tree: levels and outcome_order differ in size");
    for (const auto& x : t.outcome_order) {
      auto it = std::find(t.levels.begin(), t.levels.end(), x);
      if (it == t.levels.end()) throw Error("staged tree: outcome variable '" + x + "' is not a level");
      perm.push_back(static_cast<std::size_t>(it - t.levels.begin()));
    }
  }
  for (const auto& leaf : leaves) {
    std::string name = leaf;
    if (!perm.empty()) {
      if (leaf.size() != perm.size()) throw Error("staged tree: leaf '" + leaf + "' is not at full depth");
      for (std::size_t k = 0; k < perm.size(); ++k) name[k] = leaf[perm[k]];
    }
    leaf_name[leaf] = "p_" + name;
  }
  std::sort(leaves.begin(), leaves.end(),
            [&](const std::string& a, const std::string& b) { return leaf_name[a] < leaf_name[b]; });
  auto edge_word = [](const std::string& v, std::size_t k) { return v + static_cast<char>('0' + k); };

  std::vector<std::string> pnames;
  for (const auto& [v, k] : arity)
    for (std::size_t c = 0; c + 1 < k; ++c) pnames.push_back("t_" + edge_word(v, c));
  pnames.push_back("tau");
  std::vector<std::string> snames;
  for (const auto& leaf : leaves) snames.push_back(leaf_name[leaf]);
  VarTablePtr P = make_vars(pnames);
  VarTablePtr S = make_vars(snames);

  auto theta = [&](const std::string& v, std::size_t c) {
    std::size_t k = arity.at(v);
    if (c + 1 < k) return var(P, "t_" + edge_word(v, c));
    Polynomial r = Polynomial::constant(P, 1);
    for (std::size_t d = 0; d + 1 < k; ++d) r -= var(P, "t_" + edge_word(v, d));
    return r;
  };
  auto marginal = [&](const std::string& v) {
    Polynomial r(S);
    for (const auto& leaf : leaves)
      if (leaf.compare(0, v.size(), v) == 0) r += var(S, leaf_name.at(leaf));
    return r;
  };

  ModelSpec m;
  m.label = "staged_tree";
  m.iso.alpha = {P, S, {}};
  m.iso.beta = {S, P, {}};
  Polynomial tau = var(P, "tau");
  std::vector<Polynomial> Sbar_gens{tau}, Sgens;
  for (const auto& [v, k] : arity)
    for (std::size_t c = 0; c < k; ++c) Sbar_gens.push_back(theta(v, c));
  for (const auto& leaf : leaves) {
    Polynomial p = tau;
    for (std::size_t d = 0; d < leaf.size(); ++d) p *= theta(leaf.substr(0, d), leaf[d] - '0');
    m.iso.alpha.components.emplace_back(p);
  }
  for (const auto& [v, k] : arity) Sgens.push_back(marginal(v));
  for (const auto& leaf : leaves) Sgens.push_back(marginal(leaf));
  m.iso.S = MonoidGens(Sgens);
  m.iso.Sbar = MonoidGens(Sbar_gens);
  for (const auto& [v, k] : arity)
    for (std::size_t c = 0; c + 1 < k; ++c)
      m.iso.beta.components.push_back(RationalFunction::reduce(marginal(edge_word(v, c)), marginal(v), m.iso.S));
  m.iso.beta.components.emplace_back(marginal(""));

  m.add_eq(tau - Polynomial::constant(P, 1), "total probability");
  for (const auto& stage : t.stages)
    for (std::size_t s = 1; s < stage.size(); ++s)
      for (std::size_t c = 0; c + 1 < arity.at(stage[0]); ++c)
        m.add_eq(theta(stage[0], c) - theta(stage[s], c), "stage " + (stage[0].empty() ? std::string("root") : stage[0]) +
                                                              "~" + stage[s] + " child " + std::to_string(c));
  for (const auto& [v, k] : arity)
    for (std::size_t c = 0; c + 1 < k; ++c) m.boxes.push_back({1, static_cast<long>(2 * k - 1), static_cast<long>(2 * k * (k - 1))});
  m.boxes.push_back({1, 10, 4});
  m.iso.full = false;
  m.iso = extend_to_full(std::move(m.iso));
  return m;
}

// ---------------------------------------------------------------------------
// Lyapunov models

namespace {

std::size_t sym_index(std::size_t n, std::size_t i, std::size_t j) {  // 0-based, any order
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

std::size_t lyapunov_n(const ModelSpec& m) {
  std::size_t N = m.iso.model()->size(), n = 0;
  while (n * (n + 1) / 2 < N) ++n;
  if (n * (n + 1) / 2 != N) throw Error("not a Lyapunov model");
  return n;
}

Polynomial drift_entry(const VarTablePtr& P, std::size_t i, std::size_t j) {  // 0-based
  std::string name = "m_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
  if (P->find(name)) return Polynomial::variable(P, name);
  return Polynomial(P);
}

// Cramer's rule for A x = b: x_u = |A with column u replaced by b| / |A|.
std::vector<RationalFunction> cramer(const PolyMatrix& A, const std::vector<Polynomial>& b, const MonoidGens& hints) {
  Polynomial d = determinant(A);
  if (d.is_zero()) throw Error("singular linear system");
  std::vector<RationalFunction> out;
  for (std::size_t u = 0; u < A.cols(); ++u) {
    PolyMatrix Au = A;
    for (std::size_t r = 0; r < A.rows(); ++r) Au(r, u) = b[r];
    out.push_back(RationalFunction::reduce(determinant(Au), d, hints));
  }
  return out;
}

}  // namespace

PolyMatrix lyapunov_kronecker(const ModelSpec& m) {
  const std::size_t n = lyapunov_n(m);
  const VarTablePtr& P = m.iso.params();
  PolyMatrix B(P, n * n, n * n);
  // Row (k,l), column (a,b): coefficient of sigma_ab in (M Sigma + Sigma M^T)_kl.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          Polynomial c(P);
          if (b == l) c += drift_entry(P, k, a);
          if (a == k) c += drift_entry(P, l, b);
          B(k * n + l, a * n + b) = c;
        }
  return B;
}

PolyMatrix lyapunov_recovery_matrix(const ModelSpec& m) {
  const std::size_t n = lyapunov_n(m);
  const VarTablePtr& P = m.iso.params();
  const VarTablePtr& S = m.iso.model();
  PolyMatrix Sm = PolyMatrix::symmetric(S, "s", n);
  PolyMatrix A(S, n * (n + 1) / 2, P->size());
  for (std::size_t u = 0; u < P->size(); ++u) {
    const std::string& name = P->name(u);
    std::size_t a = std::stoul(name.substr(2, name.find('_', 2) - 2)) - 1;
    std::size_t b = std::stoul(name.substr(name.find('_', 2) + 1)) - 1;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = k; l < n; ++l) {
        Polynomial c(S);
        if (a == k) c += Sm(b, l);
        if (a == l) c += Sm(k, b);
        A(sym_index(n, k, l), u) = c;
      }
  }
  return A;
}

ModelSpec build_lyapunov(const LyapunovSpec& spec) {
  const std::size_t n = spec.n;
  if (n < 1 || n > 4) throw Error("lyapunov: dimension must be between 1 and 4");
  std::vector<VertexPair> support = spec.support;
  bool triangular = support.empty();
  if (triangular)
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 1; j <= i; ++j) support.push_back({i, j});
  for (auto [i, j] : support)
    if (i < 1 || i > n || j < 1 || j > n) throw Error("lyapunov: support entry out of range");
  std::sort(support.begin(), support.end(), [](const VertexPair& x, const VertexPair& y) {
    return std::tie(x.second, x.first) < std::tie(y.second, y.first);
  });
  support.erase(std::unique(support.begin(), support.end()), support.end());
  if (!triangular) {
    std::vector<VertexPair> lower;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 1; j <= i; ++j) lower.push_back({i, j});
    std::sort(lower.begin(), lower.end(), [](const VertexPair& x, const VertexPair& y) {
      return std::tie(x.second, x.first) < std::tie(y.second, y.first);
    });
    triangular = support == lower;
  }
  for (std::size_t i = 1; i <= n; ++i)
    if (std::find(support.begin(), support.end(), VertexPair{i, i}) == support.end())
      throw Error("lyapunov: every vertex needs its self-loop");
  if (support.size() != n * (n + 1) / 2)
    throw Error("lyapunov: the support must have n(n+1)/2 entries for the recovery system to be square");
  if (!triangular && !spec.assert_positive)
    throw Error("lyapunov: positivity of the localizing monoids is only established for the lower-triangular "
                "support; pass assert_positive to proceed");

  std::vector<std::vector<Rational>> C = spec.C;
  if (C.empty()) {
    C.assign(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) C[i][i] = 1;
  }
  if (C.size() != n) throw Error("lyapunov: C has the wrong size");
  for (std::size_t i = 0; i < n; ++i) {
    if (C[i].size() != n) throw Error("lyapunov: C has the wrong size");
    for (std::size_t j = 0; j < n; ++j)
      if (C[i][j] != C[j][i]) throw Error("lyapunov: C must be symmetric");
  }

  std::vector<std::string> pnames;
  for (auto [i, j] : support) pnames.push_back("m_" + std::to_string(i) + "_" + std::to_string(j));
  VarTablePtr P = make_vars(pnames);
  VarTablePtr S = make_vars(symmetric_names("s", n));
  PolyMatrix Sm = PolyMatrix::symmetric(S, "s", n);

  ModelSpec m;
  m.label = "lyapunov";
  m.iso.alpha = {P, S, {}};
  m.iso.beta = {S, P, {}};

  std::vector<Polynomial> Sbar_gens, Sgens;
  std::vector<Rational> stable(P->size(), 0), identity(S->size(), 0);
  for (std::size_t i = 1; i <= n; ++i) {
    stable[P->index("m_" + std::to_string(i) + "_" + std::to_string(i))] = -1;
    identity[S->index(sigma_name(i, i))] = 1;
  }
  // Forward system on the distinct entries of Sigma.
  const std::size_t N = n * (n + 1) / 2;
  PolyMatrix F(P, N, N);
  std::vector<Polynomial> rhsF, rhsA;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) F(r, c) = Polynomial(P);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k; l < n; ++l) {
      std::size_t row = sym_index(n, k, l);
      for (std::size_t j = 0; j < n; ++j) {
        F(row, sym_index(n, j, l)) += drift_entry(P, k, j);
        F(row, sym_index(n, k, j)) += drift_entry(P, l, j);
      }
      rhsF.push_back(Polynomial::constant(P, -C[k][l]));
      rhsA.push_back(Polynomial::constant(S, -C[k][l]));
    }
  if (triangular) {
    for (std::size_t i = 1; i <= n; ++i) Sbar_gens.push_back(-drift_entry(P, i - 1, i - 1));
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = i + 1; j <= n; ++j)
        Sbar_gens.push_back(-drift_entry(P, i - 1, i - 1) - drift_entry(P, j - 1, j - 1));
    for (std::size_t k = 1; k <= n; ++k) Sgens.push_back(leading_minor(Sm, k));
  } else {
    m.iso.warnings.push_back("lyapunov: monoid positivity asserted by the caller for a non-triangular support");
    Sbar_gens.push_back(positive_at(determinant(F), stable));
  }
  m.iso.Sbar = MonoidGens(Sbar_gens);
  m.iso.alpha.components = cramer(F, rhsF, m.iso.Sbar);

  m.iso.beta.domain = S;
  PolyMatrix A = lyapunov_recovery_matrix(m);
  if (!triangular) Sgens.push_back(positive_at(determinant(A), identity));
  m.iso.S = MonoidGens(Sgens);
  m.iso.beta.components = cramer(A, rhsA, m.iso.S);

  for (const auto& text : spec.extra_eq) {
    Polynomial p = Polynomial::parse(P, text);
    if (p.total_degree() > 1) throw Error("lyapunov: extra relation '" + text + "' is not linear");
    m.add_eq(p, "relation " + text);
  }
  for (auto [i, j] : support) m.boxes.push_back(i == j ? SampleBox{-10, -1, 4} : SampleBox{});
  m.iso = extend_to_full(std::move(m.iso));
  return m;
}

}  // namespace ambikit
