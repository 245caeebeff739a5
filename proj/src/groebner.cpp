#include "ambikit/groebner.hpp"

#include <algorithm>
#include <numeric>
#include <bit>
#include <sstream>

namespace ambikit {

// ---------------------------------------------------------------------------
// Term orders

namespace {

int grevlex_range(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi,
                  const std::vector<std::uint32_t>& w) {
  std::uint64_t da = 0, db = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    std::uint64_t wi = w.empty() ? 1 : w[i];
    da += wi * a.exp[i];
    db += wi * b.exp[i];
  }
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = hi; i-- > lo;)
    if (a.exp[i] != b.exp[i]) return a.exp[i] > b.exp[i] ? -1 : 1;
  return 0;
}

}  // namespace

int TermOrder::compare(const Monomial& a, const Monomial& b) const {
  switch (kind) {
    case Kind::grevlex:
      if (weights.empty()) return grevlex_cmp(a, b);
      return grevlex_range(a, b, 0, kMaxVars, weights);
    case Kind::lex:
      for (std::size_t i = 0; i < kMaxVars; ++i)
        if (a.exp[i] != b.exp[i]) return a.exp[i] > b.exp[i] ? 1 : -1;
      return 0;
    case Kind::block: {
      int c = grevlex_range(a, b, 0, split, weights);
      if (c != 0) return c;
      return grevlex_range(a, b, split, kMaxVars, weights);
    }
  }
  return 0;
}

std::uint64_t TermOrder::degree(const Monomial& m) const {
  if (weights.empty()) return m.deg;
  std::uint64_t d = 0;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (m.exp[i]) d += std::uint64_t(weights[i]) * m.exp[i];
  return d;
}

std::string TermOrder::describe() const {
  std::string s;
  switch (kind) {
    case Kind::grevlex: s = "grevlex"; break;
    case Kind::lex: s = "lex"; break;
    case Kind::block: s = "block(" + std::to_string(split) + ")"; break;
  }
  if (!weights.empty()) {
    s += "[";
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] == 1 && i >= 1 && std::all_of(weights.begin() + i, weights.end(), [](auto w) { return w == 1; }))
        break;
      if (i) s += ",";
      s += std::to_string(weights[i]);
    }
    s += "]";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Cancellation

CancelToken CancelToken::after(std::chrono::duration<double> budget) {
  CancelToken t;
  t.deadline_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(budget);
  return t;
}

void CancelToken::cancel() const { flag_->store(true); }

bool CancelToken::expired() const {
  if (flag_->load(std::memory_order_relaxed)) return true;
  return deadline_ && std::chrono::steady_clock::now() >= *deadline_;
}

IdealGens::IdealGens(VarTablePtr v, std::vector<Polynomial> g, TermOrder o) : vars(std::move(v)), order(std::move(o)) {
  for (auto& p : g) {
    if (p.is_zero()) continue;
    if (!same_vars(p.vars(), vars)) throw VarTableMismatch();
    gens.push_back(std::move(p));
  }
}

// ---------------------------------------------------------------------------
// Integer polynomials sorted by a term order

namespace {

std::uint64_t support_mask(const Monomial& m) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (m.exp[i]) mask |= std::uint64_t(1) << i;
  return mask;
}

struct IPoly {
  std::vector<Monomial> m;
  std::vector<Integer> c;
  std::uint64_t sugar = 0;
  std::uint64_t mask = 0;  // support of the leading monomial

  std::size_t size() const { return m.size(); }
  bool empty() const { return m.empty(); }
  void refresh_mask() { mask = m.empty() ? 0 : support_mask(m[0]); }
};

struct Engine {
  const TermOrder& ord;
  const CancelToken& cancel;

  IPoly from(const Polynomial& p, Rational* scale = nullptr) const {
    Integer l = 1;
    for (const auto& [mon, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    std::vector<std::pair<Monomial, Integer>> tmp;
    tmp.reserve(p.size());
    for (const auto& [mon, c] : p.terms()) tmp.emplace_back(mon, Integer(c * l));
    if (ord.kind != TermOrder::Kind::grevlex || !ord.weights.empty())
      std::sort(tmp.begin(), tmp.end(), [&](const auto& a, const auto& b) { return ord.compare(a.first, b.first) > 0; });
    IPoly out;
    out.m.reserve(tmp.size());
    out.c.reserve(tmp.size());
    std::uint64_t sugar = 0;
    for (auto& [mon, c] : tmp) {
      sugar = std::max(sugar, ord.degree(mon));
      out.m.push_back(mon);
      out.c.push_back(std::move(c));
    }
    out.sugar = sugar;
    out.refresh_mask();
    if (scale) *scale = l;
    Integer g = remove_content(out);
    if (scale) *scale /= g;
    return out;
  }

  Polynomial to(const IPoly& f, const VarTablePtr& vars, const Rational& scale = 1) const {
    std::vector<Polynomial::Term> terms;
    terms.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) terms.emplace_back(f.m[i], Rational(f.c[i]) / scale);
    return Polynomial(vars, std::move(terms));
  }

  // Divides by the positive gcd of the coefficients; returns it.
  static Integer remove_content(IPoly& f) {
    if (f.empty()) return 1;
    Integer g = 0;
    for (const auto& c : f.c) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) return g;
    }
    for (auto& c : f.c) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    return g;
  }

  static void make_lc_positive(IPoly& f) {
    if (!f.empty() && sgn(f.c[0]) < 0)
      for (auto& c : f.c) c = -c;
  }

  // f <- a*f - b*t*g, where the term of f at `pos` is t*LM(g). Returns a.
  Integer reduce_at(IPoly& f, std::size_t pos, const IPoly& g, const Monomial& t) const {
    Integer gg;
    mpz_gcd(gg.get_mpz_t(), g.c[0].get_mpz_t(), f.c[pos].get_mpz_t());
    Integer a = g.c[0] / gg;
    Integer b = f.c[pos] / gg;
    if (sgn(a) < 0) {
      a = -a;
      b = -b;
    }
    const bool scale_f = a != 1;
    IPoly out;
    out.sugar = f.sugar;
    out.m.reserve(f.size() + g.size());
    out.c.reserve(f.size() + g.size());
    for (std::size_t i = 0; i < pos; ++i) {
      out.m.push_back(f.m[i]);
      out.c.push_back(scale_f ? Integer(f.c[i] * a) : std::move(f.c[i]));
    }
    std::size_t i = pos + 1, j = 1;
    Integer tmp;
    while (i < f.size() || j < g.size()) {
      int cmp;
      Monomial tg;
      if (j < g.size()) tg = g.m[j] * t;
      if (i >= f.size()) cmp = -1;
      else if (j >= g.size()) cmp = 1;
      else cmp = ord.compare(f.m[i], tg);
      if (cmp > 0) {
        out.m.push_back(f.m[i]);
        out.c.push_back(scale_f ? Integer(f.c[i] * a) : std::move(f.c[i]));
        ++i;
      } else if (cmp < 0) {
        out.m.push_back(tg);
        mpz_mul(tmp.get_mpz_t(), g.c[j].get_mpz_t(), b.get_mpz_t());
        out.c.push_back(-tmp);
        ++j;
      } else {
        mpz_mul(tmp.get_mpz_t(), g.c[j].get_mpz_t(), b.get_mpz_t());
        Integer v = scale_f ? Integer(f.c[i] * a) : std::move(f.c[i]);
        v -= tmp;
        if (v != 0) {
          out.m.push_back(f.m[i]);
          out.c.push_back(std::move(v));
        }
        ++i;
        ++j;
      }
    }
    f = std::move(out);
    f.refresh_mask();
    return a;
  }

  // Reducer index for monomial m among `active`, preferring short ones.
  static const IPoly* find_reducer(const Monomial& m, const std::vector<const IPoly*>& reducers) {
    std::uint64_t mm = support_mask(m);
    const IPoly* best = nullptr;
    for (const IPoly* g : reducers) {
      if (g->mask & ~mm) continue;
      if (!divides(g->m[0], m)) continue;
      if (!best || g->size() < best->size()) best = g;
    }
    return best;
  }

  // Reduces f by the reducers. With tail = false only the leading term is
  // reduced. `scale` tracks f_internal = scale * f_original.
  void reduce(IPoly& f, const std::vector<const IPoly*>& reducers, bool tail, Rational* scale = nullptr) const {
    std::size_t pos = 0;
    unsigned steps = 0;
    while (pos < f.size()) {
      const IPoly* g = find_reducer(f.m[pos], reducers);
      if (!g) {
        if (!tail) break;
        ++pos;
        continue;
      }
      Monomial t = quotient(f.m[pos], g->m[0]);
      f.sugar = std::max(f.sugar, g->sugar + ord.degree(t));
      Integer a = reduce_at(f, pos, *g, t);
      if (scale && a != 1) *scale *= a;
      if (++steps % 32 == 0) {
        cancel.check();
        Integer c = remove_content(f);
        if (scale && c != 1) *scale /= c;
      }
    }
    Integer c = remove_content(f);
    if (scale && c != 1) *scale /= c;
  }

  IPoly spoly(const IPoly& f, const IPoly& g) const {
    Monomial l = lcm(f.m[0], g.m[0]);
    Monomial tf = quotient(l, f.m[0]);
    Monomial tg = quotient(l, g.m[0]);
    IPoly out;
    out.m.reserve(f.size() + g.size());
    out.c.reserve(f.size() + g.size());
    out.m.push_back(l);
    out.c.push_back(f.c[0]);
    for (std::size_t i = 1; i < f.size(); ++i) {
      out.m.push_back(f.m[i] * tf);
      out.c.push_back(f.c[i]);
    }
    out.sugar = std::max(f.sugar + ord.degree(tf), g.sugar + ord.degree(tg));
    out.refresh_mask();
    reduce_at(out, 0, g, tg);
    return out;
  }
};

struct Pair {
  std::size_t i, j;
  Monomial lcm;
  std::uint64_t sugar;
};

class Buchberger {
 public:
  Buchberger(const TermOrder& ord, const CancelToken& cancel, GbStats* stats)
      : eng_{ord, cancel}, stats_(stats) {}

  // Returns false if the unit ideal was detected.
  bool run(std::vector<IPoly> input) {
    std::sort(input.begin(), input.end(), [&](const IPoly& a, const IPoly& b) {
      int c = eng_.ord.compare(a.m[0], b.m[0]);
      return c != 0 ? c < 0 : a.size() < b.size();
    });
    for (auto& f : input) {
      eng_.cancel.check();
      eng_.reduce(f, reducers(), true);
      if (f.empty()) continue;
      if (f.m[0].is_one()) return false;
      insert(std::move(f));
    }
    while (!pairs_.empty()) {
      eng_.cancel.check();
      Pair p = select();
      if (stats_) ++stats_->pairs_reduced;
      IPoly h = eng_.spoly(polys_[p.i], polys_[p.j]);
      h.sugar = std::max(h.sugar, p.sugar);
      eng_.reduce(h, reducers(), false);
      if (h.empty()) {
        if (stats_) ++stats_->zero_reductions;
        continue;
      }
      eng_.reduce(h, reducers(), true);
      if (h.m[0].is_one()) return false;
      insert(std::move(h));
    }
    return true;
  }

  // Minimal basis, inter-reduced, positive leading coefficients.
  std::vector<IPoly> reduced_basis() {
    std::vector<IPoly> basis;
    for (std::size_t k = 0; k < polys_.size(); ++k)
      if (!redundant_[k]) basis.push_back(polys_[k]);
    std::sort(basis.begin(), basis.end(),
              [&](const IPoly& a, const IPoly& b) { return eng_.ord.compare(a.m[0], b.m[0]) < 0; });
    for (std::size_t k = 0; k < basis.size(); ++k) {
      std::vector<const IPoly*> others;
      for (std::size_t l = 0; l < basis.size(); ++l)
        if (l != k) others.push_back(&basis[l]);
      eng_.cancel.check();
      eng_.reduce(basis[k], others, true);
      Engine::make_lc_positive(basis[k]);
    }
    return basis;
  }

 private:
  Engine eng_;
  GbStats* stats_;
  std::vector<IPoly> polys_;
  std::vector<bool> redundant_;
  std::vector<Pair> pairs_;

  std::vector<const IPoly*> reducers() const {
    std::vector<const IPoly*> out;
    for (std::size_t k = 0; k < polys_.size(); ++k)
      if (!redundant_[k]) out.push_back(&polys_[k]);
    return out;
  }

  // Normal strategy: smallest lcm degree first, then the order.
  // Sugar first blows up coefficients on block orders.
  Pair select() {
    std::size_t best = 0;
    for (std::size_t k = 1; k < pairs_.size(); ++k) {
      const Pair& a = pairs_[k];
      const Pair& b = pairs_[best];
      std::uint64_t da = eng_.ord.degree(a.lcm), db = eng_.ord.degree(b.lcm);
      if (da != db) {
        if (da < db) best = k;
        continue;
      }
      int c = eng_.ord.compare(a.lcm, b.lcm);
      if (c < 0 || (c == 0 && std::tie(a.j, a.i) < std::tie(b.j, b.i))) best = k;
    }
    Pair p = pairs_[best];
    pairs_[best] = pairs_.back();
    pairs_.pop_back();
    return p;
  }

  static bool coprime(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (a.exp[i] && b.exp[i]) return false;
    return true;
  }

  // Gebauer-Moeller update for a new element.
  void insert(IPoly h) {
    Engine::make_lc_positive(h);
    const std::size_t hi = polys_.size();
    const Monomial& lh = h.m[0];
    std::vector<Pair> fresh;
    for (std::size_t k = 0; k < polys_.size(); ++k) {
      if (redundant_[k]) continue;
      const IPoly& g = polys_[k];
      Monomial l = lcm(g.m[0], lh);
      std::uint64_t s = std::max(g.sugar + eng_.ord.degree(quotient(l, g.m[0])), h.sugar + eng_.ord.degree(quotient(l, lh)));
      fresh.push_back({k, hi, l, s});
    }
    if (stats_) stats_->pairs_considered += fresh.size();
    // Criterion M/F on the new pairs.
    std::vector<Pair> kept;
    for (std::size_t a = 0; a < fresh.size(); ++a) {
      const Pair& p = fresh[a];
      if (coprime(polys_[p.i].m[0], lh)) {
        kept.push_back(p);
        continue;
      }
      bool dominated = false;
      for (std::size_t b = a + 1; b < fresh.size() && !dominated; ++b)
        if (divides(fresh[b].lcm, p.lcm)) dominated = true;
      for (const Pair& q : kept)
        if (!dominated && divides(q.lcm, p.lcm)) dominated = true;
      if (!dominated) kept.push_back(p);
    }
    // Chain criterion on the old pairs.
    std::vector<Pair> survivors;
    for (const Pair& p : pairs_) {
      if (divides(lh, p.lcm)) {
        Monomial li = lcm(polys_[p.i].m[0], lh);
        Monomial lj = lcm(polys_[p.j].m[0], lh);
        if (li != p.lcm && lj != p.lcm) continue;
      }
      survivors.push_back(p);
    }
    // Product criterion: coprime pairs reduce to zero.
    for (const Pair& p : kept)
      if (!coprime(polys_[p.i].m[0], lh)) survivors.push_back(p);
    pairs_ = std::move(survivors);
    for (std::size_t k = 0; k < polys_.size(); ++k)
      if (!redundant_[k] && divides(lh, polys_[k].m[0])) redundant_[k] = true;
    polys_.push_back(std::move(h));
    redundant_.push_back(false);
  }
};

Polynomial finish_poly(const Engine& eng, const IPoly& f, const VarTablePtr& vars) { return eng.to(f, vars); }

void sort_basis(std::vector<Polynomial>& basis, const TermOrder& ord) {
  std::sort(basis.begin(), basis.end(), [&](const Polynomial& a, const Polynomial& b) {
    return ord.compare(leading_term(a, ord).first, leading_term(b, ord).first) < 0;
  });
}

}  // namespace

Polynomial::Term leading_term(const Polynomial& p, const TermOrder& order) {
  if (p.is_zero()) throw Error("leading term of the zero polynomial");
  if (order.kind == TermOrder::Kind::grevlex && order.weights.empty()) return p.terms().front();
  const Polynomial::Term* best = &p.terms().front();
  for (const auto& t : p.terms())
    if (order.compare(t.first, best->first) > 0) best = &t;
  return *best;
}

GroebnerBasis buchberger(const IdealGens& I, const CancelToken& cancel, GbStats* stats) {
  GroebnerBasis G;
  G.vars = I.vars;
  G.order = I.order;
  G.reduced = true;
  if (I.gens.empty()) return G;
  Engine eng{I.order, cancel};
  std::vector<IPoly> input;
  for (const auto& g : I.gens) {
    if (!same_vars(g.vars(), I.vars)) throw VarTableMismatch();
    if (g.is_zero()) continue;
    input.push_back(eng.from(g));
  }
  if (input.empty()) return G;
  Buchberger bb(I.order, cancel, stats);
  if (!bb.run(std::move(input))) {
    G.basis.push_back(Polynomial::constant(I.vars, 1));
    return G;
  }
  for (const auto& f : bb.reduced_basis()) G.basis.push_back(finish_poly(eng, f, I.vars));
  return G;
}

Polynomial normal_form(const Polynomial& f, const GroebnerBasis& G) {
  if (f.is_zero()) return f;
  if (!same_vars(f.vars(), G.vars)) throw VarTableMismatch();
  CancelToken none;
  Engine eng{G.order, none};
  std::vector<IPoly> polys;
  polys.reserve(G.basis.size());
  for (const auto& g : G.basis) polys.push_back(eng.from(g));
  std::vector<const IPoly*> reducers;
  for (const auto& p : polys) reducers.push_back(&p);
  Rational scale;
  IPoly r = eng.from(f, &scale);
  eng.reduce(r, reducers, true, &scale);
  return eng.to(r, f.vars(), scale);
}

bool contains(const GroebnerBasis& G, const Polynomial& f) { return normal_form(f, G).is_zero(); }

bool contains(const GroebnerBasis& G, const IdealGens& J) {
  for (const auto& g : J.gens)
    if (!contains(G, g)) return false;
  return true;
}

bool is_groebner(const GroebnerBasis& G) {
  CancelToken none;
  Engine eng{G.order, none};
  std::vector<IPoly> polys;
  for (const auto& g : G.basis) polys.push_back(eng.from(g));
  std::vector<const IPoly*> reducers;
  for (const auto& p : polys) reducers.push_back(&p);
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t j = i + 1; j < polys.size(); ++j) {
      IPoly s = eng.spoly(polys[i], polys[j]);
      eng.reduce(s, reducers, true);
      if (!s.empty()) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Ideal operations

namespace {

std::string fresh_name(const VarTable& vars, const std::string& base) {
  std::string name = base;
  while (vars.find(name)) name += "_";
  return name;
}

// Table with `front` names first followed by the remaining names of `vars`.
VarTablePtr reordered(const VarTable& vars, const std::vector<std::string>& front) {
  std::vector<std::string> names = front;
  for (const auto& n : vars.names())
    if (std::find(front.begin(), front.end(), n) == front.end()) names.push_back(n);
  return make_vars(std::move(names));
}

GroebnerBasis grevlex_basis(const VarTablePtr& vars, std::vector<Polynomial> gens, const CancelToken& cancel) {
  return buchberger(IdealGens(vars, std::move(gens), TermOrder::grevlex()), cancel);
}

}  // namespace

namespace {

// Homogeneous case: adjoin z = f with weight deg f as the last variable, take
// a weighted grevlex basis, strip powers of z (which then saturates at z) and
// substitute f back for z.
GroebnerBasis saturate_homogeneous(const IdealGens& I, const Polynomial& f, const CancelToken& cancel) {
  const std::size_t n = I.vars->size();
  if (n + 1 > kMaxVars) throw DimensionError("too many variables for saturation");
  std::vector<std::string> names = I.vars->names();
  names.push_back(fresh_name(*I.vars, "__z"));
  VarTablePtr big = make_vars(std::move(names));
  TermOrder ord = TermOrder::grevlex();
  ord.weights.assign(kMaxVars, 1);
  ord.weights[n] = f.total_degree();
  std::vector<Polynomial> gens;
  for (const auto& g : I.gens) gens.push_back(g.embed(big));
  gens.push_back(Polynomial::variable(big, n) - f.embed(big));
  GroebnerBasis B = buchberger(IdealGens(big, std::move(gens), ord), cancel);
  std::vector<Polynomial> fpow{Polynomial::constant(I.vars, 1)};
  std::vector<Polynomial> out;
  for (const auto& g : B.basis) {
    std::uint16_t low = UINT16_MAX;
    for (const auto& [m, c] : g.terms()) low = std::min(low, m.exp[n]);
    Polynomial r(I.vars);
    std::vector<std::vector<Polynomial::Term>> by_power;
    for (const auto& [m, c] : g.terms()) {
      std::size_t k = m.exp[n] - low;
      if (by_power.size() <= k) by_power.resize(k + 1);
      Monomial mm = m;
      mm.deg -= mm.exp[n];
      mm.exp[n] = 0;
      by_power[k].emplace_back(mm, c);
    }
    for (std::size_t k = 0; k < by_power.size(); ++k) {
      if (by_power[k].empty()) continue;
      while (fpow.size() <= k) fpow.push_back(fpow.back() * f);
      r += Polynomial(I.vars, std::move(by_power[k])) * fpow[k];
    }
    out.push_back(std::move(r));
  }
  return grevlex_basis(I.vars, std::move(out), cancel);
}

}  // namespace

GroebnerBasis saturate(const IdealGens& I, const Polynomial& f, const CancelToken& cancel) {
  if (f.is_zero()) throw Error("saturation at the zero polynomial");
  if (I.gens.empty()) return grevlex_basis(I.vars, {}, cancel);
  if (f.is_constant()) return grevlex_basis(I.vars, I.gens, cancel);
  if (!same_vars(f.vars(), I.vars)) throw VarTableMismatch();
  if (f.homogeneous() && std::all_of(I.gens.begin(), I.gens.end(), [](const Polynomial& g) { return g.homogeneous(); }))
    return saturate_homogeneous(I, f, cancel);
  return saturate_rabinowitsch(I, f, cancel);
}

GroebnerBasis saturate_rabinowitsch(const IdealGens& I, const Polynomial& f, const CancelToken& cancel) {
  if (f.is_zero()) throw Error("saturation at the zero polynomial");
  if (I.gens.empty()) return grevlex_basis(I.vars, {}, cancel);
  if (f.is_constant()) return grevlex_basis(I.vars, I.gens, cancel);
  if (!same_vars(f.vars(), I.vars)) throw VarTableMismatch();
  std::string t = fresh_name(*I.vars, "__t");
  VarTablePtr big = reordered(*I.vars, {t});
  std::vector<Polynomial> gens;
  for (const auto& g : I.gens) gens.push_back(g.embed(big));
  Polynomial tv = Polynomial::variable(big, 0);
  gens.push_back(Polynomial::constant(big, 1) - tv * f.embed(big));
  GroebnerBasis B = buchberger(IdealGens(big, std::move(gens), TermOrder::block(1)), cancel);
  GroebnerBasis out;
  out.vars = I.vars;
  out.order = TermOrder::grevlex();
  out.reduced = true;
  std::vector<std::size_t> back(big->size());
  for (std::size_t i = 1; i < big->size(); ++i) back[i] = i - 1;
  for (const auto& g : B.basis)
    if (!g.involves(0)) out.basis.push_back(g.embed(I.vars, back));
  sort_basis(out.basis, out.order);
  return out;
}

GroebnerBasis saturate_monoid(const IdealGens& I, const MonoidGens& S, const CancelToken& cancel, bool refold) {
  GroebnerBasis current = grevlex_basis(I.vars, I.gens, cancel);
  if (S.empty() || current.basis.empty()) return current;
  while (true) {
    GroebnerBasis before = current;
    for (const auto& s : S) {
      if (current.is_unit()) return current;
      current = saturate(current.ideal(), s.embed(I.vars), cancel);
    }
    if (!refold || current.basis == before.basis) return current;
    // The ideal grew; fold once more to confirm the fixed point.
  }
}

GroebnerBasis quotient(const IdealGens& I, const Polynomial& f, const CancelToken& cancel) {
  if (f.is_zero()) throw Error("quotient by the zero polynomial");
  if (I.gens.empty()) return grevlex_basis(I.vars, {}, cancel);
  std::string t = fresh_name(*I.vars, "__t");
  VarTablePtr big = reordered(*I.vars, {t});
  Polynomial tv = Polynomial::variable(big, 0);
  Polynomial fb = f.embed(big);
  std::vector<Polynomial> gens;
  for (const auto& g : I.gens) gens.push_back(tv * g.embed(big));
  gens.push_back((Polynomial::constant(big, 1) - tv) * fb);
  GroebnerBasis B = buchberger(IdealGens(big, std::move(gens), TermOrder::block(1)), cancel);
  std::vector<std::size_t> back(big->size());
  for (std::size_t i = 1; i < big->size(); ++i) back[i] = i - 1;
  std::vector<Polynomial> q;
  for (const auto& g : B.basis) {
    if (g.involves(0)) continue;
    auto d = divide_exact(g.embed(I.vars, back), f);
    if (!d) throw Error("internal: intersection element not divisible by the quotient polynomial");
    q.push_back(std::move(*d));
  }
  return grevlex_basis(I.vars, std::move(q), cancel);
}

GroebnerBasis eliminate(const IdealGens& I, std::span<const std::string> drop, const CancelToken& cancel) {
  std::vector<std::string> front(drop.begin(), drop.end());
  for (const auto& d : front)
    if (!I.vars->find(d)) throw Error("eliminate: unknown variable " + d);
  std::vector<std::string> rest;
  for (const auto& n : I.vars->names())
    if (std::find(front.begin(), front.end(), n) == front.end()) rest.push_back(n);
  VarTablePtr small = make_vars(rest);
  if (front.empty()) return grevlex_basis(I.vars, I.gens, cancel);
  VarTablePtr big = reordered(*I.vars, front);
  std::vector<Polynomial> gens;
  for (const auto& g : I.gens) gens.push_back(g.embed(big));
  GroebnerBasis B = buchberger(IdealGens(big, std::move(gens), TermOrder::block(front.size())), cancel);
  GroebnerBasis out;
  out.vars = small;
  out.order = TermOrder::grevlex();
  out.reduced = true;
  std::vector<std::size_t> back(big->size(), 0);
  for (std::size_t i = front.size(); i < big->size(); ++i) back[i] = i - front.size();
  for (const auto& g : B.basis) {
    bool free = true;
    for (std::size_t i = 0; i < front.size(); ++i)
      if (g.involves(i)) free = false;
    if (free) out.basis.push_back(g.embed(small, back));
  }
  sort_basis(out.basis, out.order);
  return out;
}

bool ideal_equal(const IdealGens& I, const IdealGens& J, const CancelToken& cancel) {
  if (!same_vars(I.vars, J.vars)) throw VarTableMismatch();
  GroebnerBasis a = grevlex_basis(I.vars, I.gens, cancel);
  GroebnerBasis b = grevlex_basis(J.vars, J.gens, cancel);
  return a.basis == b.basis;
}

int krull_dimension(const GroebnerBasis& G) {
  const std::size_t n = G.vars->size();
  if (G.basis.empty()) return static_cast<int>(n);
  if (G.is_unit()) return -1;
  std::vector<std::uint64_t> supports;
  for (const auto& g : G.basis) supports.push_back(support_mask(leading_term(g, G.order).first));
  int best = 0;
  // Depth-first search over variable subsets avoiding every leading support.
  std::vector<std::pair<std::size_t, std::uint64_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [k, set] = stack.back();
    stack.pop_back();
    int size = std::popcount(set);
    if (size + static_cast<int>(n - k) <= best) continue;
    if (k == n) {
      best = std::max(best, size);
      continue;
    }
    stack.push_back({k + 1, set});
    std::uint64_t with = set | (std::uint64_t(1) << k);
    bool ok = true;
    for (auto s : supports)
      if ((s & ~with) == 0) ok = false;
    if (ok) stack.push_back({k + 1, with});
  }
  return best;
}

std::uint64_t basis_hash(const GroebnerBasis& G) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& g : G.basis) {
    for (char c : g.to_string() + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace ambikit
