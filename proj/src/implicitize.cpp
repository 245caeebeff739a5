#include "ambikit/implicitize.hpp"

#include <algorithm>

#include "ambikit/parallel.hpp"

namespace ambikit {

// ---------------------------------------------------------------------------
// Sampling

namespace {

bool is_linear(const Polynomial& p) { return p.total_degree() <= 1; }

// Coefficient row [c_0 .. c_{n-1}, constant] of a linear polynomial.
std::vector<Rational> linear_row(const Polynomial& p, std::size_t n) {
  std::vector<Rational> row(n + 1, 0);
  for (const auto& [m, c] : p.terms()) {
    if (m.is_one()) {
      row[n] = c;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (m.exp[i]) row[i] = c;
  }
  return row;
}

}  // namespace

ParameterSampler::ParameterSampler(const ModelSpec& m, std::uint64_t seed, std::size_t budget)
    : m_(m), rng_(seed), budget_(budget) {
  const std::size_t n = m.iso.params()->size();
  std::vector<std::vector<Rational>> rows;
  for (const auto& g : m.eq_gens)
    if (is_linear(g)) rows.push_back(linear_row(g, n));
  // Gauss-Jordan elimination.
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    Rational inv = 1 / rows[r][c];
    for (auto& v : rows[r]) v *= inv;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == r || rows[k][c] == 0) continue;
      Rational f = rows[k][c];
      for (std::size_t j = 0; j <= n; ++j) rows[k][j] -= f * rows[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  for (std::size_t k = r; k < rows.size(); ++k)
    if (rows[k][n] != 0) budget_ = 0;  // inconsistent: no points at all
  std::vector<bool> is_pivot(n, false);
  for (std::size_t k = 0; k < pivot_cols.size(); ++k) {
    is_pivot[pivot_cols[k]] = true;
    // x_c + sum_j a_j x_j + b = 0  =>  x_c = -b - sum_j a_j x_j
    std::vector<Rational> expr(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != pivot_cols[k]) expr[j] = -rows[k][j];
    expr[n] = -rows[k][n];
    pivots_.emplace_back(pivot_cols[k], std::move(expr));
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!is_pivot[i]) free_.push_back(i);
}

std::size_t ParameterSampler::min_box() const {
  std::size_t best = 0;
  for (auto i : free_) {
    SampleBox b = i < m_.boxes.size() ? m_.boxes[i] : SampleBox{};
    if (best == 0 || b.count() < best) best = b.count();
  }
  return best == 0 ? 1 : best;
}

bool ParameterSampler::in_region(const std::vector<Rational>& theta) const {
  for (const auto& g : m_.eq_gens)
    if (evaluate(g, theta) != 0) return false;
  for (const auto& g : m_.iso.Sbar)
    if (evaluate(g, theta) <= 0) return false;
  for (const auto& g : m_.ineq_gens)
    if (evaluate(g, theta) < 0) return false;
  for (const auto& g : m_.noneq_gens)
    if (evaluate(g, theta) == 0) return false;
  return true;
}

std::optional<std::vector<Rational>> ParameterSampler::next() {
  const std::size_t n = m_.iso.params()->size();
  while (budget_ > 0) {
    --budget_;
    std::vector<Rational> theta(n, 0);
    for (auto i : free_) {
      SampleBox b = i < m_.boxes.size() ? m_.boxes[i] : SampleBox{};
      long k = b.lo + static_cast<long>(rng_() % b.count());
      theta[i] = Rational(k, b.den);
      theta[i].canonicalize();
    }
    for (const auto& [c, expr] : pivots_) {
      Rational v = expr[n];
      for (auto j : free_) v += expr[j] * theta[j];
      theta[c] = v;
    }
    if (in_region(theta)) return theta;
  }
  return std::nullopt;
}

std::vector<Rational> ParameterSampler::require() {
  auto p = next();
  if (!p) throw RegionSamplingExhausted("no interior parameter point found within the sampling budget");
  return *p;
}

// ---------------------------------------------------------------------------
// Markov property

MarkovProperty markov_property(const ModelSpec& m, const ImplicitOptions& opts) {
  if (!m.iso.full) throw Error("markov_property: the isomorphism is not full; run extend_to_full first");
  MarkovProperty mp;
  mp.vars = m.iso.model();
  ParameterSampler sampler(m, opts.seed, opts.sample_budget);
  auto witness = sampler.next();
  if (!witness)
    throw EmptyParameterSpaceSuspected("no interior point of the parameter space found in " +
                                       std::to_string(opts.sample_budget) + " samples");
  mp.witness = *witness;
  auto run = [&](const std::vector<Polynomial>& gens, const std::vector<std::string>& labels,
                 std::vector<Polynomial>& out, std::vector<std::string>& sources) {
    TransferReport t = transfer(m.iso, gens);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      // Constants that hold everywhere carry no information.
      const Polynomial& q = t.numerators[i];
      if (&out != &mp.equations && q.is_constant() && !q.is_zero() && q.leading_coefficient() > 0) continue;
      out.push_back(q);
      sources.push_back((i < labels.size() ? labels[i] : std::string("generator")) + ": " + gens[i].to_string());
    }
    for (auto& w : t.warnings) mp.warnings.push_back(std::move(w));
  };
  run(m.eq_gens, m.eq_labels, mp.equations, mp.equation_sources);
  run(m.ineq_gens, m.ineq_labels, mp.inequalities, mp.inequality_sources);
  run(m.noneq_gens, m.noneq_labels, mp.inequations, mp.inequation_sources);
  for (const auto& s : m.iso.S) {
    mp.positivities.push_back(s);
    mp.positivity_sources.push_back("localizing monoid");
  }
  for (const auto& w : m.iso.warnings) mp.warnings.push_back(w);
  return mp;
}

// ---------------------------------------------------------------------------
// Vanishing ideals

namespace {

// <q> : S^infinity for a single generator: divide out every factor q shares
// with a monoid generator.
Polynomial saturate_principal(Polynomial q, const MonoidGens& S) {
  for (const auto& s : S) {
    while (!q.is_constant()) {
      Polynomial g = gcd(q, s);
      if (g.is_constant()) break;
      q = *divide_exact(q, g);
    }
  }
  return q;
}

GroebnerBasis zero_ideal(const VarTablePtr& vars) {
  GroebnerBasis G;
  G.vars = vars;
  G.reduced = true;
  return G;
}

}  // namespace

GroebnerBasis vanishing_ideal(const ModelSpec& m, const CancelToken& cancel) {
  if (!m.linear_equations() && !m.prime_asserted)
    throw Error("vanishing_ideal: the parameter-side equations are not linear and primality was not asserted");
  if (!m.iso.full) throw Error("vanishing_ideal: the isomorphism is not full");
  TransferReport t = transfer(m.iso, m.eq_gens);
  std::vector<Polynomial> gens;
  for (auto& p : t.numerators)
    if (!p.is_zero()) gens.push_back(std::move(p));
  if (gens.empty()) return zero_ideal(m.iso.model());
  if (gens.size() == 1) {
    Polynomial q = saturate_principal(gens[0], m.iso.S);
    return buchberger(IdealGens(m.iso.model(), {q}), cancel);
  }
  return saturate_monoid(IdealGens(m.iso.model(), gens), m.iso.S, cancel);
}

GroebnerBasis elimination_vanishing_ideal(const ModelSpec& m, const CancelToken& cancel) {
  const VarTablePtr& P = m.iso.params();
  const VarTablePtr& X = m.iso.model();
  std::vector<std::string> names = P->names();
  const std::string z = "__z";
  names.push_back(z);
  for (const auto& x : X->names()) names.push_back(x);
  if (names.size() > kMaxVars) throw Error("elimination: too many variables");
  VarTablePtr R = make_vars(names);

  std::vector<Polynomial> gens;
  std::vector<Polynomial> dens;
  for (std::size_t j = 0; j < X->size(); ++j) {
    const RationalFunction& a = m.iso.alpha.components[j];
    gens.push_back(a.den().embed(R) * Polynomial::variable(R, X->name(j)) - a.num().embed(R));
    if (a.den().is_constant()) continue;
    Polynomial d = normalize(a.den());
    if (std::find(dens.begin(), dens.end(), d) == dens.end()) dens.push_back(d);
  }
  for (const auto& g : m.eq_gens) gens.push_back(g.embed(R));
  if (!dens.empty()) {
    Polynomial L = Polynomial::constant(R, 1);
    for (const auto& d : dens) L *= d.embed(R);
    gens.push_back(Polynomial::variable(R, z) * L - Polynomial::constant(R, 1));
  }
  std::vector<std::string> drop = P->names();
  drop.push_back(z);
  GroebnerBasis G = eliminate(IdealGens(R, gens), drop, cancel);
  // Re-home the result on the model table.
  GroebnerBasis out = zero_ideal(X);
  out.reduced = G.reduced;
  for (const auto& g : G.basis) out.basis.push_back(g.embed(X));
  return out;
}

GroebnerBasis dag_local_markov_ideal(const GraphSpec& g, const CancelToken& cancel) {
  for (const auto& e : g.edges)
    if (e.kind != EdgeKind::directed || e.a >= e.b)
      throw Error("local Markov ideal: topologically ordered DAGs only");
  const std::size_t n = g.n;
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j) names.push_back(sigma_name(i, j));
  VarTablePtr S = make_vars(names);
  PolyMatrix Sm = PolyMatrix::symmetric(S, "s", n);
  std::vector<Polynomial> prs, J;
  for (std::size_t v = 1; v <= n; ++v) {
    std::vector<std::size_t> P;
    for (auto p : g.parents(v)) P.push_back(p - 1);
    if (!P.empty()) prs.push_back(minor(Sm, P, P));
    for (std::size_t i = 1; i < v; ++i)
      if (!g.has_edge(i, v, EdgeKind::directed)) J.push_back(conditional_minor(Sm, i - 1, v - 1, P));
  }
  if (J.empty()) return zero_ideal(S);
  GroebnerBasis G = buchberger(IdealGens(S, J), cancel);
  for (const auto& p : prs) G = saturate(G.ideal(), p, cancel);
  return G;
}

// ---------------------------------------------------------------------------
// Point checks

std::vector<PointCheck> check_point(const MarkovProperty& mp, std::span<const Rational> x) {
  if (x.size() != mp.vars->size()) throw DimensionError("check_point: point has the wrong number of coordinates");
  std::vector<PointCheck> out;
  auto run = [&](const std::vector<Polynomial>& gens, const std::vector<std::string>& src, const char* kind,
                 auto ok) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
      PointCheck c;
      c.kind = kind;
      c.source = i < src.size() ? src[i] : "";
      c.value = evaluate(gens[i], x);
      c.verdict = ok(c.value) ? Verdict::holds : Verdict::fails;
      out.push_back(std::move(c));
    }
  };
  run(mp.equations, mp.equation_sources, "equation", [](const Rational& v) { return v == 0; });
  run(mp.inequalities, mp.inequality_sources, "inequality", [](const Rational& v) { return v >= 0; });
  run(mp.inequations, mp.inequation_sources, "inequation", [](const Rational& v) { return v != 0; });
  run(mp.positivities, mp.positivity_sources, "positivity", [](const Rational& v) { return v > 0; });
  return out;
}

// ---------------------------------------------------------------------------
// Model equivalence

namespace {

GroebnerBasis parameter_ideal(const ModelSpec& m) {
  if (m.eq_gens.empty()) return zero_ideal(m.iso.params());
  return buchberger(IdealGens(m.iso.params(), m.eq_gens));
}

bool same_up_to_positive_scalar(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return primitive(a) == primitive(b);
}

bool listed(const std::vector<Polynomial>& list, const Polynomial& f) {
  return std::any_of(list.begin(), list.end(), [&](const Polynomial& g) { return same_up_to_positive_scalar(f, g); });
}

// Positive coefficients in coordinates that the other model keeps positive.
bool positive_combination(const Polynomial& f, const MarkovProperty& other) {
  if (f.is_zero()) return false;
  std::vector<bool> positive(f.vars()->size(), false);
  for (const auto& g : other.positivities)
    if (g.size() == 1 && g.total_degree() == 1 && g.leading_coefficient() > 0)
      for (std::size_t i = 0; i < positive.size(); ++i)
        if (g.involves(i)) positive[i] = true;
  for (const auto& [m, c] : f.terms()) {
    if (c <= 0) return false;
    for (std::size_t i = 0; i < positive.size(); ++i)
      if (m.exp[i] && !positive[i]) return false;
  }
  return true;
}

// The constraint is implied by the other Markov property syntactically.
bool implied(const std::string& kind, const Polynomial& f, const MarkovProperty& other) {
  if (positive_combination(f, other)) return true;
  if (f.is_constant() && !f.is_zero()) {
    Rational c = f.constant_value();
    if (kind == "inequation") return true;
    return c > 0;
  }
  if (kind == "inequality")
    return listed(other.inequalities, f) || listed(other.positivities, f);
  if (kind == "inequation")
    return listed(other.inequations, f) || listed(other.positivities, f) ||
           listed(other.inequations, -f) || listed(other.positivities, -f);
  if (kind == "positivity")
    return listed(other.positivities, f) || (listed(other.inequalities, f) && (listed(other.inequations, f) ||
                                                                              listed(other.inequations, -f)));
  return false;
}

bool sign_ok(const std::string& kind, const Rational& v) {
  if (kind == "equation") return v == 0;
  if (kind == "inequality") return v >= 0;
  if (kind == "inequation") return v != 0;
  return v > 0;
}

Polynomial rehome(const Polynomial& f, const VarTablePtr& target) {
  if (same_vars(f.vars(), target)) return f;
  return f.embed(target);
}

// Symbolic check of an equation against the other model: the numerator of
// the pullback must lie in the other parameter-side ideal.
std::optional<Polynomial> equation_residual(const Polynomial& F, const ModelSpec& other, const GroebnerBasis& Gp) {
  RationalFunction pulled = other.iso.phi(rehome(F, other.iso.model()));
  Polynomial r = normal_form(pulled.num(), Gp);
  if (r.is_zero()) return std::nullopt;
  return r;
}

void compare_direction(const MarkovProperty& mp, const ModelSpec& other, const MarkovProperty& other_mp,
                       const std::string& direction, EquivMode mode, const ImplicitOptions& opts,
                       std::size_t trials, EquivalenceVerdict& v) {
  GroebnerBasis Gp = parameter_ideal(other);
  std::vector<std::optional<Polynomial>> residuals(mp.equations.size());
  parallel_for(mp.equations.size(),
               [&](std::size_t i) { residuals[i] = equation_residual(mp.equations[i], other, Gp); });
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (!residuals[i]) continue;
    Certificate c;
    c.direction = direction;
    c.kind = "equation";
    c.constraint = mp.equations[i].to_string();
    c.source = mp.equation_sources[i];
    c.residual = residuals[i]->to_string();
    v.certificates.push_back(std::move(c));
  }
  if (mode == EquivMode::zariski) return;

  struct Pending {
    std::string kind;
    const Polynomial* f;
    const std::string* source;
  };
  std::vector<Pending> pending;
  auto collect = [&](const std::vector<Polynomial>& gens, const std::vector<std::string>& src, const char* kind) {
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (!implied(kind, rehome(gens[i], other.iso.model()), other_mp)) pending.push_back({kind, &gens[i], &src[i]});
  };
  collect(mp.inequalities, mp.inequality_sources, "inequality");
  collect(mp.inequations, mp.inequation_sources, "inequation");
  collect(mp.positivities, mp.positivity_sources, "positivity");
  if (pending.empty()) return;

  v.sampled = true;
  ParameterSampler sampler(other, opts.seed, opts.sample_budget);
  std::vector<bool> refuted(pending.size(), false);
  for (std::size_t t = 0; t < trials; ++t) {
    auto theta = sampler.next();
    if (!theta) {
      v.notes.push_back(direction + ": sampling budget exhausted after " + std::to_string(t) + " points");
      break;
    }
    std::vector<Rational> x = other.iso.alpha(*theta);
    for (std::size_t k = 0; k < pending.size(); ++k) {
      if (refuted[k]) continue;
      Rational val = evaluate(rehome(*pending[k].f, other.iso.model()), x);
      if (sign_ok(pending[k].kind, val)) continue;
      refuted[k] = true;
      Certificate c;
      c.direction = direction;
      c.kind = pending[k].kind;
      c.constraint = pending[k].f->to_string();
      c.source = *pending[k].source;
      c.point = *theta;
      v.certificates.push_back(std::move(c));
    }
  }
  std::size_t open = std::count(refuted.begin(), refuted.end(), false);
  if (open)
    v.notes.push_back(direction + ": " + std::to_string(open) +
                      " inequality-type constraints hold at every sampled point (equivalent modulo sampling)");
}

}  // namespace

EquivalenceVerdict model_equiv(const ModelSpec& m1, const ModelSpec& m2, EquivMode mode, const ImplicitOptions& opts,
                               std::size_t trials) {
  if (m1.iso.model()->names() != m2.iso.model()->names())
    throw Error("model_equiv: the models live on different model coordinates");
  MarkovProperty mp1 = markov_property(m1, opts), mp2 = markov_property(m2, opts);
  EquivalenceVerdict v;
  compare_direction(mp1, m2, mp2, "1->2", mode, opts, trials, v);
  compare_direction(mp2, m1, mp1, "2->1", mode, opts, trials, v);
  if (!v.certificates.empty())
    v.result = EquivResult::inequivalent;
  else if (v.sampled)
    v.result = EquivResult::undecided;
  else
    v.result = EquivResult::equivalent;
  return v;
}

bool verify_certificate(const Certificate& c, const ModelSpec& m1, const ModelSpec& m2) {
  const ModelSpec& other = c.direction == "1->2" ? m2 : m1;
  Polynomial F = Polynomial::parse(other.iso.model(), c.constraint);
  if (c.kind == "equation" && c.point.empty()) {
    GroebnerBasis Gp = parameter_ideal(other);
    auto r = equation_residual(F, other, Gp);
    return r && r->to_string() == c.residual;
  }
  ParameterSampler check(other, 0, 0);
  if (c.point.size() != other.iso.params()->size() || !check.in_region(c.point)) return false;
  Rational val = evaluate(F, other.iso.alpha(c.point));
  return !sign_ok(c.kind, val);
}

// ---------------------------------------------------------------------------
// Schwartz-Zippel

SzResult sz_vanishes(const Polynomial& F, const ModelSpec& m, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw Error("sz_vanishes: at least one trial is required");
  Polynomial f = rehome(F, m.iso.model());
  ParameterSampler sampler(m, seed);
  // deg(phi(F) * L^deg F) <= deg F * (max numerator degree + deg L).
  std::uint32_t max_num = 0, deg_L = 0;
  std::vector<Polynomial> dens;
  for (const auto& a : m.iso.alpha.components) {
    max_num = std::max(max_num, a.num().total_degree());
    if (a.den().is_constant()) continue;
    Polynomial d = normalize(a.den());
    if (std::find(dens.begin(), dens.end(), d) != dens.end()) continue;
    deg_L += d.total_degree();
    dens.push_back(std::move(d));
  }
  SzResult r;
  r.bound = std::min(1.0, double(f.total_degree()) * double(max_num + deg_L) / double(sampler.min_box()));
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<Rational> theta = sampler.require();
    Rational v = evaluate(f, m.iso.alpha(theta));
    if (v != 0) {
      r.probably_zero = false;
      r.witness = std::move(theta);
      r.value = v;
      return r;
    }
  }
  return r;
}

}  // namespace ambikit
