#include "ambikit/fraction.hpp"

#include <map>

namespace ambikit {

namespace {

// Primitive with positive integer content, sign kept.
Polynomial signed_primitive(const Polynomial& p) { return primitive(p); }

Polynomial lcm_poly(const Polynomial& a, const Polynomial& b) {
  if (a.is_constant()) return b;
  if (b.is_constant()) return a;
  if (associates(a, b) || divide_exact(a, b)) return a;
  if (b.total_degree() == 1) return a * b;  // irreducible and not a factor
  Polynomial g = gcd(a, b);
  if (g.is_constant()) return a * b;
  return *divide_exact(a, g) * b;
}

}  // namespace

// ---------------------------------------------------------------------------
// MonoidGens

MonoidGens::MonoidGens(std::vector<Polynomial> gens) {
  for (auto& g : gens) add(g);
}

bool MonoidGens::add(const Polynomial& g) {
  if (g.is_zero()) throw Error("monoid generator must be nonzero");
  if (g.is_constant()) return false;
  Polynomial key = normalize(g);
  for (const auto& k : keys_)
    if (k == key) return false;
  gens_.push_back(signed_primitive(g));
  keys_.push_back(std::move(key));
  return true;
}

bool MonoidGens::contains_associate(const Polynomial& g) const {
  Polynomial key = normalize(g);
  for (const auto& k : keys_)
    if (k == key) return true;
  return false;
}

// ---------------------------------------------------------------------------
// RationalFunction

RationalFunction::RationalFunction(Polynomial p) : num_(std::move(p)) {
  den_ = Polynomial::constant(num_.vars(), 1);
}

RationalFunction RationalFunction::reduce(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw DivisionByZero("rational function with zero denominator");
  if (num.is_zero()) return RationalFunction(Polynomial(den.vars()));
  if (!den.is_constant()) {
    Polynomial g = gcd(num, den);
    if (!g.is_constant()) {
      num = *divide_exact(num, g);
      den = *divide_exact(den, g);
    }
  }
  RationalFunction r;
  Rational c = content(den);
  if (sgn(den.leading_coefficient()) < 0) c = -c;
  r.num_ = c == 1 ? std::move(num) : num.scaled(1 / c);
  r.den_ = c == 1 ? std::move(den) : den.scaled(1 / c);
  return r;
}

RationalFunction RationalFunction::reduce(Polynomial num, Polynomial den, const MonoidGens& hints) {
  if (den.is_zero()) throw DivisionByZero("rational function with zero denominator");
  if (num.is_zero() || den.is_constant() || hints.empty()) return reduce(std::move(num), std::move(den));
  // Cancel hint factors common to both sides.
  Polynomial rest = den;
  for (const auto& g : hints) {
    bool num_divisible = true;
    while (true) {
      auto dq = divide_exact(rest, g);
      if (!dq) break;
      rest = std::move(*dq);
      if (!num_divisible) continue;
      auto nq = divide_exact(num, g);
      if (!nq) {
        num_divisible = false;
        continue;
      }
      num = std::move(*nq);
      den = *divide_exact(den, g);
    }
    if (rest.is_constant()) break;
  }
  if (!rest.is_constant()) return reduce(std::move(num), std::move(den));
  // The denominator is a product of irreducible hints none of which divides
  // num any more, so num and den are coprime.
  RationalFunction r;
  Rational c = content(den);
  if (sgn(den.leading_coefficient()) < 0) c = -c;
  r.num_ = num.scaled(1 / c);
  r.den_ = den.scaled(1 / c);
  return r;
}

RationalFunction RationalFunction::parse(const VarTablePtr& vars, std::string_view text) {
  auto pos = text.find(" / ");
  if (pos == std::string_view::npos) return RationalFunction(Polynomial::parse(vars, text));
  return reduce(Polynomial::parse(vars, text.substr(0, pos)), Polynomial::parse(vars, text.substr(pos + 3)));
}

std::string RationalFunction::to_string() const {
  if (den_.is_zero() || (den_.is_constant() && den_.constant_value() == 1)) return num_.to_string();
  return num_.to_string() + " / " + den_.to_string();
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.den() == b.den()) return RationalFunction::reduce(a.num() + b.num(), a.den());
  return RationalFunction::reduce(a.num() * b.den() + b.num() * a.den(), a.den() * b.den());
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction::reduce(a.num() * b.num(), a.den() * b.den());
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw DivisionByZero("division by the zero rational function");
  return RationalFunction::reduce(a.num() * b.den(), a.den() * b.num());
}

Rational evaluate(const RationalFunction& r, std::span<const Rational> point) {
  Rational d = evaluate(r.den(), point);
  if (d == 0) throw DivisionByZero("denominator vanishes at the evaluation point");
  return evaluate(r.num(), point) / d;
}

// ---------------------------------------------------------------------------
// Monoid factorization

Polynomial strip_monoid(const Polynomial& p, const MonoidGens& S, std::vector<unsigned>& exponents) {
  exponents.assign(S.size(), 0);
  Polynomial rest = p;
  bool changed = true;
  while (changed && !rest.is_constant()) {
    changed = false;
    for (std::size_t i = 0; i < S.size(); ++i) {
      while (!rest.is_constant()) {
        auto q = divide_exact(rest, S[i]);
        if (!q) break;
        rest = std::move(*q);
        ++exponents[i];
        changed = true;
      }
    }
  }
  return rest;
}

FactoredFraction factor_denominator(const RationalFunction& r, const MonoidGens& S) {
  FactoredFraction out;
  Polynomial rest = strip_monoid(r.den(), S, out.denominator.exponents);
  if (!rest.is_constant()) throw DenominatorOutsideMonoid(rest.to_string());
  Rational unit = rest.constant_value();
  Polynomial num = r.num();
  if (sgn(unit) < 0) {
    unit = -unit;
    num = -num;
  }
  if (!num.is_zero()) {
    Rational c = content(num);
    num = num.scaled(1 / c);
    unit /= c;
  }
  out.numerator = std::move(num);
  out.denominator.unit = unit;
  return out;
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

PowerFraction substitute_impl(const Polynomial& p, std::span<const RationalFunction> assignment,
                              bool all_components) {
  if (!p.vars()) throw Error("substitute: polynomial without a variable table");
  if (assignment.size() != p.vars()->size())
    throw DimensionError("substitute: assignment size differs from the variable count");
  VarTablePtr target;
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (!target && assignment[i].vars()) target = assignment[i].vars();
    if (p.involves(i)) {
      if (!assignment[i].vars()) throw Error("substitute: variable " + p.vars()->name(i) + " unassigned");
      used.push_back(i);
    }
  }
  if (!target) throw Error("substitute: empty assignment");

  // Common denominator L.
  Polynomial L = Polynomial::constant(target, 1);
  std::vector<const Polynomial*> seen;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (!assignment[i].vars() || (!all_components && !p.involves(i))) continue;
    const Polynomial& d = assignment[i].den();
    if (d.is_constant()) continue;
    bool dup = false;
    for (auto* s : seen)
      if (*s == d) dup = true;
    if (dup) continue;
    seen.push_back(&d);
    L = lcm_poly(L, d);
  }
  PowerFraction out;
  out.base = L;
  if (p.is_constant()) {
    out.num = Polynomial::constant(target, p.is_zero() ? Rational(0) : p.constant_value());
    return out;
  }

  // Scaled numerators N_i * L / D_i with cached powers.
  std::vector<std::vector<Polynomial>> powers(assignment.size());
  for (std::size_t i : used) {
    const auto& a = assignment[i];
    Polynomial scaled = a.den() == L ? a.num() : a.num() * *divide_exact(L, a.den());
    powers[i].push_back(Polynomial::constant(target, 1));
    powers[i].push_back(std::move(scaled));
  }
  auto power = [&](std::size_t i, unsigned e) -> const Polynomial& {
    while (powers[i].size() <= e) powers[i].push_back(powers[i].back() * powers[i][1]);
    return powers[i][e];
  };
  const bool trivial = L.is_constant();
  const unsigned d = p.total_degree();
  std::vector<Polynomial> lpow{Polynomial::constant(target, 1)};
  if (!trivial)
    while (lpow.size() <= d) lpow.push_back(lpow.back() * L);

  // Group terms by their degree deficit to share the L powers.
  std::map<unsigned, Polynomial> by_deficit;
  for (const auto& [m, c] : p.terms()) {
    Polynomial t = Polynomial::constant(target, c);
    for (std::size_t i : used)
      if (m.exp[i]) t = t * power(i, m.exp[i]);
    unsigned deficit = trivial ? 0 : d - m.deg;
    auto [it, inserted] = by_deficit.try_emplace(deficit, Polynomial(target));
    it->second += t;
  }
  Polynomial num(target);
  for (auto& [deficit, part] : by_deficit) num += deficit ? part * lpow[deficit] : part;
  out.num = std::move(num);
  out.power = trivial ? 0 : d;
  return out;
}

}  // namespace

CommonDenominator substitute_term(const Polynomial& p, std::span<const RationalFunction> assignment) {
  if (!p.is_monomial()) throw Error("substitute_term: expected a single term");
  if (assignment.size() != p.vars()->size())
    throw DimensionError("substitute: assignment size differs from the variable count");
  const auto& [m, c] = p.terms().front();
  VarTablePtr target;
  for (const auto& a : assignment)
    if (a.vars()) target = a.vars();
  if (!target) throw Error("substitute: empty assignment");
  CommonDenominator out;
  out.numerators.push_back(Polynomial::constant(target, c));
  out.denominator = Polynomial::constant(target, 1);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (!m.exp[i]) continue;
    if (!assignment[i].vars()) throw Error("substitute: variable " + p.vars()->name(i) + " unassigned");
    out.numerators[0] *= assignment[i].num().pow(m.exp[i]);
    out.denominator *= assignment[i].den().pow(m.exp[i]);
  }
  return out;
}

PowerFraction substitute_unreduced(const Polynomial& p, std::span<const RationalFunction> assignment) {
  return substitute_impl(p, assignment, true);
}

RationalFunction substitute(const Polynomial& p, std::span<const RationalFunction> assignment,
                            const MonoidGens& hints) {
  if (p.is_monomial()) {
    CommonDenominator t = substitute_term(p, assignment);
    return RationalFunction::reduce(std::move(t.numerators[0]), std::move(t.denominator), hints);
  }
  PowerFraction f = substitute_impl(p, assignment, false);
  if (f.num.is_zero()) return RationalFunction(std::move(f.num));
  Polynomial den = f.power == 0 ? Polynomial::constant(f.num.vars(), 1) : f.base.pow(f.power);
  return RationalFunction::reduce(std::move(f.num), std::move(den), hints);
}

CommonDenominator common_denominator(std::span<const RationalFunction> entries) {
  CommonDenominator out;
  if (entries.empty()) return out;
  Polynomial L = Polynomial::constant(entries[0].vars(), 1);
  for (const auto& e : entries) L = lcm_poly(L, e.den());
  L = normalize(L);
  for (const auto& e : entries) out.numerators.push_back(e.num() * *divide_exact(L, e.den()));
  out.denominator = std::move(L);
  return out;
}

}  // namespace ambikit
