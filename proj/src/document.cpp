#include "ambikit/document.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace ambikit {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw SchemaError(path + ": " + what); }

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(path + "." + k, "unknown key");
}

std::size_t as_index(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

Rational as_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    try {
      Rational r(j.get<std::string>());
      r.canonicalize();
      return r;
    } catch (const std::invalid_argument&) {
    }
  }
  fail(path, "expected an integer or a rational string such as \"1/2\"");
}

VertexPair as_pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected a pair [a, b]");
  return {as_index(j[0], path + "[0]"), as_index(j[1], path + "[1]")};
}

std::string rational_text(const Rational& r) { return r.get_str(); }

json pair_json(const VertexPair& p) { return json::array({p.first, p.second}); }

GraphSpec parse_graph(const json& j, const std::string& family, const std::string& path) {
  only_keys(j, path,
            {"n", "edges", "bidirected", "vertex_colors", "edge_colors", "interventions", "nonpositive_partials",
             "monotone"});
  GraphSpec g;
  if (!j.contains("n")) fail(path, "missing 'n'");
  g.n = as_index(j["n"], path + ".n");
  EdgeKind kind = family == "concentration" ? EdgeKind::undirected : EdgeKind::directed;
  if (j.contains("edges")) {
    const json& e = array_at(j["edges"], path + ".edges");
    for (std::size_t k = 0; k < e.size(); ++k) {
      auto [a, b] = as_pair(e[k], path + ".edges[" + std::to_string(k) + "]");
      g.edges.push_back({a, b, kind});
    }
  }
  if (j.contains("bidirected")) {
    const json& e = array_at(j["bidirected"], path + ".bidirected");
    for (std::size_t k = 0; k < e.size(); ++k) {
      auto [a, b] = as_pair(e[k], path + ".bidirected[" + std::to_string(k) + "]");
      g.edges.push_back({a, b, EdgeKind::bidirected});
    }
  }
  if (j.contains("vertex_colors")) {
    const json& c = array_at(j["vertex_colors"], path + ".vertex_colors");
    for (std::size_t k = 0; k < c.size(); ++k) {
      std::string p = path + ".vertex_colors[" + std::to_string(k) + "]";
      std::vector<std::size_t> cls;
      for (std::size_t t = 0; t < array_at(c[k], p).size(); ++t) cls.push_back(as_index(c[k][t], p));
      g.vertex_classes.push_back(std::move(cls));
    }
  }
  if (j.contains("edge_colors")) {
    const json& c = array_at(j["edge_colors"], path + ".edge_colors");
    for (std::size_t k = 0; k < c.size(); ++k) {
      std::string p = path + ".edge_colors[" + std::to_string(k) + "]";
      std::vector<VertexPair> cls;
      for (std::size_t t = 0; t < array_at(c[k], p).size(); ++t) cls.push_back(as_pair(c[k][t], p));
      g.edge_classes.push_back(std::move(cls));
    }
  }
  if (j.contains("interventions")) {
    const json& c = array_at(j["interventions"], path + ".interventions");
    for (std::size_t k = 0; k < c.size(); ++k) {
      std::string p = path + ".interventions[" + std::to_string(k) + "]";
      std::vector<std::size_t> I;
      for (std::size_t t = 0; t < array_at(c[k], p).size(); ++t) I.push_back(as_index(c[k][t], p));
      g.interventions.push_back(std::move(I));
    }
  }
  if (j.contains("nonpositive_partials"))
    g.nonpositive_partials = as_bool(j["nonpositive_partials"], path + ".nonpositive_partials");
  if (j.contains("monotone")) g.monotone = as_bool(j["monotone"], path + ".monotone");
  return g;
}

json graph_json(const GraphSpec& g) {
  json j;
  j["n"] = g.n;
  json edges = json::array(), bi = json::array();
  for (const auto& e : g.edges) (e.kind == EdgeKind::bidirected ? bi : edges).push_back(json::array({e.a, e.b}));
  j["edges"] = edges;
  if (!bi.empty()) j["bidirected"] = bi;
  if (!g.vertex_classes.empty()) j["vertex_colors"] = g.vertex_classes;
  if (!g.edge_classes.empty()) {
    json c = json::array();
    for (const auto& cls : g.edge_classes) {
      json row = json::array();
      for (const auto& p : cls) row.push_back(pair_json(p));
      c.push_back(row);
    }
    j["edge_colors"] = c;
  }
  if (!g.interventions.empty()) j["interventions"] = g.interventions;
  if (g.nonpositive_partials) j["nonpositive_partials"] = true;
  if (g.monotone) j["monotone"] = true;
  return j;
}

std::vector<std::string> string_list(const json& j, const std::string& path) {
  std::vector<std::string> out;
  const json& a = array_at(j, path);
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(as_string(a[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

StagedTreeSpec parse_tree(const json& j, const std::string& path) {
  only_keys(j, path, {"arities", "internal", "stages", "levels", "outcome_order"});
  StagedTreeSpec t;
  if (j.contains("arities") == j.contains("internal")) fail(path, "give exactly one of 'arities' and 'internal'");
  if (j.contains("arities")) {
    std::vector<std::size_t> ar;
    const json& a = array_at(j["arities"], path + ".arities");
    for (std::size_t k = 0; k < a.size(); ++k) ar.push_back(as_index(a[k], path + ".arities"));
    if (ar.empty()) fail(path + ".arities", "at least one level is required");
    std::size_t leaves = 1;
    for (auto r : ar) {
      if (r < 2 || r > 10) fail(path + ".arities", "arities must lie in 2..10");
      leaves *= r;
      if (leaves > 4096) fail(path + ".arities", "tree too large");
    }
    t = StagedTreeSpec::uniform(ar);
  } else {
    const json& a = array_at(j["internal"], path + ".internal");
    for (std::size_t k = 0; k < a.size(); ++k) {
      std::string p = path + ".internal[" + std::to_string(k) + "]";
      only_keys(a[k], p, {"vertex", "children"});
      if (!a[k].contains("vertex") || !a[k].contains("children")) fail(p, "needs 'vertex' and 'children'");
      t.internal.emplace_back(as_string(a[k]["vertex"], p + ".vertex"), as_index(a[k]["children"], p + ".children"));
    }
  }
  if (j.contains("stages")) {
    const json& a = array_at(j["stages"], path + ".stages");
    for (std::size_t k = 0; k < a.size(); ++k)
      t.stages.push_back(string_list(a[k], path + ".stages[" + std::to_string(k) + "]"));
  }
  if (j.contains("levels")) t.levels = string_list(j["levels"], path + ".levels");
  if (j.contains("outcome_order")) t.outcome_order = string_list(j["outcome_order"], path + ".outcome_order");
  return t;
}

json tree_json(const StagedTreeSpec& t) {
  json j;
  json internal = json::array();
  for (const auto& [v, k] : t.internal) internal.push_back({{"vertex", v}, {"children", k}});
  j["internal"] = internal;
  j["stages"] = t.stages;
  if (!t.levels.empty()) j["levels"] = t.levels;
  if (!t.outcome_order.empty()) j["outcome_order"] = t.outcome_order;
  return j;
}

LyapunovSpec parse_lyapunov(const json& j, const std::string& path) {
  only_keys(j, path, {"n", "support", "C", "extra_eq", "assert_positive"});
  LyapunovSpec l;
  if (j.contains("n")) l.n = as_index(j["n"], path + ".n");
  if (j.contains("support")) {
    const json& a = array_at(j["support"], path + ".support");
    for (std::size_t k = 0; k < a.size(); ++k)
      l.support.push_back(as_pair(a[k], path + ".support[" + std::to_string(k) + "]"));
  }
  if (j.contains("C")) {
    const json& a = array_at(j["C"], path + ".C");
    for (std::size_t r = 0; r < a.size(); ++r) {
      std::string p = path + ".C[" + std::to_string(r) + "]";
      std::vector<Rational> row;
      for (std::size_t c = 0; c < array_at(a[r], p).size(); ++c) row.push_back(as_rational(a[r][c], p));
      l.C.push_back(std::move(row));
    }
  }
  if (j.contains("extra_eq")) l.extra_eq = string_list(j["extra_eq"], path + ".extra_eq");
  if (j.contains("assert_positive")) l.assert_positive = as_bool(j["assert_positive"], path + ".assert_positive");
  return l;
}

json lyapunov_json(const LyapunovSpec& l) {
  json j;
  j["n"] = l.n;
  if (!l.support.empty()) {
    json s = json::array();
    for (const auto& p : l.support) s.push_back(pair_json(p));
    j["support"] = s;
  }
  if (!l.C.empty()) {
    json c = json::array();
    for (const auto& row : l.C) {
      json r = json::array();
      for (const auto& v : row) r.push_back(rational_text(v));
      c.push_back(r);
    }
    j["C"] = c;
  }
  if (!l.extra_eq.empty()) j["extra_eq"] = l.extra_eq;
  if (l.assert_positive) j["assert_positive"] = true;
  return j;
}

DocumentOptions parse_options(const json& j, const std::string& path) {
  only_keys(j, path, {"seed", "order", "box", "timeout_seconds", "prime_asserted"});
  DocumentOptions o;
  if (j.contains("seed")) o.seed = as_index(j["seed"], path + ".seed");
  if (j.contains("order")) {
    o.order = as_string(j["order"], path + ".order");
    if (o.order != "grevlex" && o.order != "lex") fail(path + ".order", "expected \"grevlex\" or \"lex\"");
  }
  if (j.contains("box")) {
    const json& b = j["box"];
    only_keys(b, path + ".box", {"lo", "hi", "den"});
    SampleBox box;
    auto integer = [&](const char* key, long& out) {
      if (!b.contains(key)) return;
      if (!b[key].is_number_integer()) fail(path + ".box." + key, "expected an integer");
      out = b[key].get<long>();
    };
    integer("lo", box.lo);
    integer("hi", box.hi);
    integer("den", box.den);
    if (box.hi < box.lo || box.den <= 0) fail(path + ".box", "need lo <= hi and den > 0");
    o.box = box;
  }
  if (j.contains("timeout_seconds")) {
    if (!j["timeout_seconds"].is_number() || j["timeout_seconds"].get<double>() < 0)
      fail(path + ".timeout_seconds", "expected a non-negative number");
    o.timeout_seconds = j["timeout_seconds"].get<double>();
  }
  if (j.contains("prime_asserted")) o.prime_asserted = as_bool(j["prime_asserted"], path + ".prime_asserted");
  return o;
}

json options_json(const DocumentOptions& o) {
  json j;
  j["seed"] = o.seed;
  j["order"] = o.order;
  if (o.box) j["box"] = {{"lo", o.box->lo}, {"hi", o.box->hi}, {"den", o.box->den}};
  if (o.timeout_seconds > 0) j["timeout_seconds"] = o.timeout_seconds;
  if (o.prime_asserted) j["prime_asserted"] = true;
  return j;
}

json rational_array(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(rational_text(r));
  return a;
}

std::vector<Rational> rationals_from(const json& j, const std::string& path) {
  std::vector<Rational> out;
  const json& a = array_at(j, path);
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(as_rational(a[k], path));
  return out;
}

json poly_array(const std::vector<Polynomial>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(p.to_string());
  return a;
}

std::vector<Polynomial> polys_from(const VarTablePtr& vars, const json& j, const std::string& path) {
  std::vector<Polynomial> out;
  for (const auto& s : string_list(j, path)) {
    try {
      out.push_back(Polynomial::parse(vars, s));
    } catch (const ParseError& e) {
      fail(path, e.what());
    }
  }
  return out;
}

}  // namespace

bool operator==(const GraphSpec& a, const GraphSpec& b) {
  return a.n == b.n && a.edges == b.edges && a.vertex_classes == b.vertex_classes &&
         a.edge_classes == b.edge_classes && a.interventions == b.interventions &&
         a.nonpositive_partials == b.nonpositive_partials && a.monotone == b.monotone;
}

bool operator==(const StagedTreeSpec& a, const StagedTreeSpec& b) {
  return a.internal == b.internal && a.stages == b.stages && a.levels == b.levels &&
         a.outcome_order == b.outcome_order;
}

bool operator==(const LyapunovSpec& a, const LyapunovSpec& b) {
  return a.n == b.n && a.support == b.support && a.C == b.C && a.extra_eq == b.extra_eq &&
         a.assert_positive == b.assert_positive;
}

bool operator==(const ModelDocument& a, const ModelDocument& b) {
  return a.family == b.family && a.label == b.label && a.graph == b.graph && a.tree == b.tree &&
         a.lyapunov == b.lyapunov && a.options == b.options;
}

ModelDocument parse_document(const json& j) {
  only_keys(j, "$", {"family", "label", "graph", "tree", "lyapunov", "options"});
  ModelDocument d;
  if (!j.contains("family")) fail("$", "missing 'family'");
  d.family = as_string(j["family"], "$.family");
  if (j.contains("label")) d.label = as_string(j["label"], "$.label");
  const char* body = nullptr;
  if (d.family == "concentration" || d.family == "sem")
    body = "graph";
  else if (d.family == "staged_tree")
    body = "tree";
  else if (d.family == "lyapunov")
    body = "lyapunov";
  else
    fail("$.family", "unknown family '" + d.family + "'");
  for (const char* key : {"graph", "tree", "lyapunov"})
    if (j.contains(key) && std::string(key) != body) fail("$", std::string("'") + key + "' does not belong to family " + d.family);
  if (!j.contains(body) && d.family != "lyapunov") fail("$", std::string("missing '") + body + "'");
  if (d.family == "concentration" || d.family == "sem") d.graph = parse_graph(j["graph"], d.family, "$.graph");
  if (d.family == "staged_tree") d.tree = parse_tree(j["tree"], "$.tree");
  if (d.family == "lyapunov" && j.contains("lyapunov")) d.lyapunov = parse_lyapunov(j["lyapunov"], "$.lyapunov");
  if (j.contains("options")) d.options = parse_options(j["options"], "$.options");
  return d;
}

ModelDocument parse_document_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return parse_document(j);
}

ModelDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document_text(ss.str());
}

json to_json(const ModelDocument& d) {
  json j;
  j["family"] = d.family;
  if (!d.label.empty()) j["label"] = d.label;
  if (d.family == "concentration" || d.family == "sem") j["graph"] = graph_json(d.graph);
  if (d.family == "staged_tree") j["tree"] = tree_json(d.tree);
  if (d.family == "lyapunov") j["lyapunov"] = lyapunov_json(d.lyapunov);
  j["options"] = options_json(d.options);
  return j;
}

ModelSpec build_model(const ModelDocument& d) {
  ModelSpec m;
  if (d.family == "concentration")
    m = build_concentration(d.graph);
  else if (d.family == "sem")
    m = build_sem(d.graph);
  else if (d.family == "staged_tree")
    m = build_staged_tree(d.tree);
  else if (d.family == "lyapunov")
    m = build_lyapunov(d.lyapunov);
  else
    throw SchemaError("$.family: unknown family '" + d.family + "'");
  if (!d.label.empty()) m.label = d.label;
  if (d.options.box)
    for (auto& b : m.boxes) b = *d.options.box;
  if (d.options.prime_asserted) m.prime_asserted = true;
  return m;
}

// ---------------------------------------------------------------------------
// Results

json to_json(const MarkovProperty& mp) {
  json j;
  j["variables"] = mp.vars->names();
  j["equations"] = poly_array(mp.equations);
  j["inequalities"] = poly_array(mp.inequalities);
  j["inequations"] = poly_array(mp.inequations);
  j["positivities"] = poly_array(mp.positivities);
  j["provenance"] = {{"equations", mp.equation_sources},
                     {"inequalities", mp.inequality_sources},
                     {"inequations", mp.inequation_sources},
                     {"positivities", mp.positivity_sources}};
  j["witness"] = rational_array(mp.witness);
  j["warnings"] = mp.warnings;
  return j;
}

MarkovProperty markov_from_json(const json& j) {
  only_keys(j, "$", {"variables", "equations", "inequalities", "inequations", "positivities", "provenance", "witness",
                     "warnings"});
  MarkovProperty mp;
  mp.vars = make_vars(string_list(j.at("variables"), "$.variables"));
  mp.equations = polys_from(mp.vars, j.at("equations"), "$.equations");
  mp.inequalities = polys_from(mp.vars, j.at("inequalities"), "$.inequalities");
  mp.inequations = polys_from(mp.vars, j.at("inequations"), "$.inequations");
  mp.positivities = polys_from(mp.vars, j.at("positivities"), "$.positivities");
  const json& p = j.at("provenance");
  mp.equation_sources = string_list(p.at("equations"), "$.provenance.equations");
  mp.inequality_sources = string_list(p.at("inequalities"), "$.provenance.inequalities");
  mp.inequation_sources = string_list(p.at("inequations"), "$.provenance.inequations");
  mp.positivity_sources = string_list(p.at("positivities"), "$.provenance.positivities");
  mp.witness = rationals_from(j.at("witness"), "$.witness");
  mp.warnings = string_list(j.at("warnings"), "$.warnings");
  return mp;
}

json to_json(const GroebnerBasis& G) {
  json j;
  j["variables"] = G.vars->names();
  j["order"] = G.order.describe();
  j["generators"] = poly_array(G.basis);
  return j;
}

GroebnerBasis basis_from_json(const json& j) {
  only_keys(j, "$", {"variables", "order", "generators"});
  GroebnerBasis G;
  G.vars = make_vars(string_list(j.at("variables"), "$.variables"));
  std::string order = as_string(j.at("order"), "$.order");
  if (order == TermOrder::grevlex().describe())
    G.order = TermOrder::grevlex();
  else if (order == TermOrder::lex().describe())
    G.order = TermOrder::lex();
  else
    fail("$.order", "unsupported order '" + order + "'");
  G.basis = polys_from(G.vars, j.at("generators"), "$.generators");
  G.reduced = true;
  return G;
}

const char* to_string(EquivResult r) {
  switch (r) {
    case EquivResult::equivalent:
      return "equivalent";
    case EquivResult::inequivalent:
      return "inequivalent";
    case EquivResult::undecided:
      return "undecided";
  }
  return "undecided";
}

json to_json(const EquivalenceVerdict& v) {
  json j;
  j["result"] = to_string(v.result);
  j["sampled"] = v.sampled;
  json certs = json::array();
  for (const auto& c : v.certificates) {
    json cj;
    cj["direction"] = c.direction;
    cj["kind"] = c.kind;
    cj["constraint"] = c.constraint;
    cj["source"] = c.source;
    if (!c.residual.empty()) cj["residual"] = c.residual;
    if (!c.point.empty()) cj["point"] = rational_array(c.point);
    certs.push_back(cj);
  }
  j["certificates"] = certs;
  j["notes"] = v.notes;
  return j;
}

EquivalenceVerdict verdict_from_json(const json& j) {
  only_keys(j, "$", {"result", "sampled", "certificates", "notes"});
  EquivalenceVerdict v;
  std::string r = as_string(j.at("result"), "$.result");
  if (r == "equivalent")
    v.result = EquivResult::equivalent;
  else if (r == "inequivalent")
    v.result = EquivResult::inequivalent;
  else if (r == "undecided")
    v.result = EquivResult::undecided;
  else
    fail("$.result", "unknown verdict '" + r + "'");
  v.sampled = as_bool(j.at("sampled"), "$.sampled");
  const json& certs = array_at(j.at("certificates"), "$.certificates");
  for (std::size_t k = 0; k < certs.size(); ++k) {
    std::string p = "$.certificates[" + std::to_string(k) + "]";
    const json& cj = certs[k];
    only_keys(cj, p, {"direction", "kind", "constraint", "source", "residual", "point"});
    Certificate c;
    c.direction = as_string(cj.at("direction"), p + ".direction");
    c.kind = as_string(cj.at("kind"), p + ".kind");
    c.constraint = as_string(cj.at("constraint"), p + ".constraint");
    c.source = as_string(cj.at("source"), p + ".source");
    if (cj.contains("residual")) c.residual = as_string(cj["residual"], p + ".residual");
    if (cj.contains("point")) c.point = rationals_from(cj["point"], p + ".point");
    v.certificates.push_back(std::move(c));
  }
  v.notes = string_list(j.at("notes"), "$.notes");
  return v;
}

json to_json(const std::vector<PointCheck>& checks) {
  json a = json::array();
  for (const auto& c : checks)
    a.push_back({{"kind", c.kind},
                 {"source", c.source},
                 {"verdict", c.verdict == Verdict::holds ? "holds" : "fails"},
                 {"value", rational_text(c.value)}});
  return a;
}

}  // namespace ambikit
