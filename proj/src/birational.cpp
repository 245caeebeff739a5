#include "ambikit/birational.hpp"

#include <random>

#include "ambikit/parallel.hpp"

namespace ambikit {

RationalFunction RationalMap::pullback(const Polynomial& p, const MonoidGens& hints) const {
  if (!same_vars(p.vars(), codomain)) throw VarTableMismatch();
  return substitute(p, components, hints);
}

namespace {

const RationalFunction* lookup(const std::vector<std::pair<Polynomial, RationalFunction>>& known, const Polynomial& p) {
  for (const auto& [k, v] : known)
    if (k == p) return &v;
  return nullptr;
}

}  // namespace

RationalFunction BirationalIso::phi(const Polynomial& f) const {
  if (auto* k = lookup(known_phi, f)) return *k;
  return alpha.pullback(f, Sbar);
}

RationalFunction BirationalIso::psi(const Polynomial& g) const {
  if (auto* k = lookup(known_psi, g)) return *k;
  return beta.pullback(g, S);
}

std::vector<std::string> check_known_images(const BirationalIso& iso, std::uint64_t seed, unsigned trials) {
  std::vector<std::string> failures;
  std::mt19937_64 rng(seed);
  auto run = [&](const std::vector<std::pair<Polynomial, RationalFunction>>& known, const RationalMap& map) {
    const std::size_t n = map.domain->size();
    for (const auto& [p, image] : known) {
      for (unsigned t = 0; t < trials; ++t) {
        std::vector<Rational> x(n);
        for (auto& v : x) {
          v = Rational(static_cast<long>(rng() % 61) - 30, 7);
          v.canonicalize();
        }
        try {
          Rational lhs = evaluate(p, map(x));
          Rational rhs = evaluate(image, x);
          if (lhs != rhs) {
            failures.push_back("known image of " + p.to_string() + " disagrees at a sample point");
            break;
          }
        } catch (const DivisionByZero&) {
        }
      }
    }
  };
  run(iso.known_phi, iso.alpha);
  run(iso.known_psi, iso.beta);
  return failures;
}

std::vector<Rational> RationalMap::operator()(std::span<const Rational> point) const {
  std::vector<Rational> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(evaluate(c, point));
  return out;
}

void validate(const BirationalIso& iso) {
  const auto& a = iso.alpha;
  const auto& b = iso.beta;
  if (!a.domain || !a.codomain || !b.domain || !b.codomain) throw Error("iso: missing variable table");
  if (!same_vars(a.domain, b.codomain) || !same_vars(a.codomain, b.domain))
    throw Error("iso: alpha and beta tables do not match up");
  if (a.components.size() != a.codomain->size() || b.components.size() != b.codomain->size())
    throw DimensionError("iso: component count differs from the codomain size");
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    std::vector<unsigned> e;
    if (!strip_monoid(a.components[i].den(), iso.Sbar, e).is_constant())
      throw DenominatorOutsideMonoid("alpha component " + a.codomain->name(i) + ": " +
                                     a.components[i].den().to_string());
  }
  for (std::size_t i = 0; i < b.components.size(); ++i) {
    std::vector<unsigned> e;
    if (!strip_monoid(b.components[i].den(), iso.S, e).is_constant())
      throw DenominatorOutsideMonoid("beta component " + b.codomain->name(i) + ": " +
                                     b.components[i].den().to_string());
  }
}

namespace {

// p composed with `first`, unreduced: num / (den * base^power). Monoid
// factors of p are substituted one at a time so that their denominators
// stay small; the cofactor goes over the lcm of the denominators it uses.
struct Composed {
  Polynomial num, den, base;
  unsigned power = 0;
};

Composed compose_plain(const Polynomial& p, const RationalMap& first) {
  const VarTablePtr& X = first.domain;
  if (p.is_monomial()) {
    CommonDenominator t = substitute_term(p, first.components);
    return {std::move(t.numerators[0]), std::move(t.denominator), Polynomial::constant(X, 1), 0};
  }
  std::vector<RationalFunction> used = first.components;
  for (std::size_t v = 0; v < used.size(); ++v)
    if (!p.involves(v)) used[v] = RationalFunction(Polynomial(X));
  PowerFraction f = substitute_unreduced(p, used);
  return {std::move(f.num), Polynomial::constant(X, 1), std::move(f.base), f.power};
}

Composed compose(const Polynomial& p, const RationalMap& first, const MonoidGens& factors) {
  std::vector<unsigned> e;
  Polynomial rest = factors.empty() ? p : strip_monoid(p, factors, e);
  Composed out = compose_plain(rest, first);
  for (std::size_t g = 0; g < e.size(); ++g) {
    if (!e[g]) continue;
    Composed c = compose_plain(factors[g], first);
    out.num *= c.num.pow(e[g]);
    out.den *= c.den.pow(e[g]);
    if (c.power == 0) continue;
    if (out.power == 0 || out.base == c.base) {
      out.base = c.base;
      out.power += c.power * e[g];
    } else {
      out.den *= c.base.pow(c.power * e[g]);
    }
  }
  return out;
}

// Checks second(first(x))_i = x_i for every i, where `first` maps X -> Y
// and `second` maps Y -> X. Compares cross-multiplied numerators instead of
// reducing the composed fractions. `factors` is the monoid over Y.
std::vector<ComponentFailure> check_composition(const RationalMap& first, const RationalMap& second,
                                                const MonoidGens& hints, const MonoidGens& factors) {
  std::vector<ComponentFailure> failures;
  const auto& X = first.domain;
  std::vector<std::optional<ComponentFailure>> slots(second.components.size());
  parallel_for(second.components.size(), [&](std::size_t i) {
    const auto& comp = second.components[i];
    Composed n = compose(comp.num(), first, factors);
    Composed d = compose(comp.den(), first, factors);
    Polynomial x = Polynomial::variable(X, i);
    // n.num / (n.den n.base^a) == x d.num / (d.den d.base^b)
    Polynomial lhs = n.num * d.den, rhs_den = d.num * n.den;
    if (n.base == d.base) {
      if (d.power > n.power) lhs *= d.base.pow(d.power - n.power);
      if (n.power > d.power) rhs_den *= n.base.pow(n.power - d.power);
    } else {
      lhs *= d.base.pow(d.power);
      rhs_den *= n.base.pow(n.power);
    }
    Polynomial rhs = x * rhs_den;
    if (lhs == rhs) return;
    RationalFunction residual = RationalFunction::reduce(lhs - rhs, rhs_den, hints);
    slots[i] = ComponentFailure{X->name(i), residual.to_string()};
  });
  for (auto& s : slots)
    if (s) failures.push_back(std::move(*s));
  return failures;
}

}  // namespace

VerificationReport verify_inverse(const BirationalIso& iso, bool both_directions) {
  validate(iso);
  VerificationReport r;
  r.failures = check_composition(iso.alpha, iso.beta, iso.Sbar, iso.S);
  if (both_directions) r.back_failures = check_composition(iso.beta, iso.alpha, iso.S, iso.Sbar);
  r.ok = r.failures.empty() && r.back_failures.empty();
  return r;
}

namespace {

// For each generator g of `from`, appends the part of num(map*(g)) that the
// monoid `to` does not account for. Returns true if `to` grew.
bool extend_side(const MonoidGens& from, const RationalMap& map,
                 const std::vector<std::pair<Polynomial, RationalFunction>>& known, MonoidGens& to,
                 std::vector<std::string>& warnings, const char* side) {
  std::vector<Polynomial> cofactors(from.size());
  parallel_for(from.size(), [&](std::size_t i) {
    const RationalFunction* k = lookup(known, from[i]);
    RationalFunction r = k ? *k : map.pullback(from[i], to);
    FactoredFraction f = factor_denominator(r, to);
    std::vector<unsigned> e;
    cofactors[i] = strip_monoid(f.numerator, to, e);
  });
  bool grew = false;
  for (std::size_t i = 0; i < cofactors.size(); ++i) {
    Polynomial c = cofactors[i];
    if (c.is_constant()) continue;
    // Cofactors found in this round may share factors with earlier ones.
    std::vector<unsigned> e;
    c = strip_monoid(c, to, e);
    if (c.is_constant()) continue;
    if (c.total_degree() > 1)
      warnings.push_back(std::string("appended ") + side + " generator of degree " +
                         std::to_string(c.total_degree()) + " without an irreducibility check: " + c.to_string());
    grew |= to.add(c);
  }
  return grew;
}

}  // namespace

BirationalIso extend_to_full(BirationalIso iso, unsigned max_rounds) {
  validate(iso);
  if (iso.full) return iso;
  for (unsigned round = 0; round < max_rounds; ++round) {
    bool grew = extend_side(iso.Sbar, iso.beta, iso.known_psi, iso.S, iso.warnings, "S");
    grew |= extend_side(iso.S, iso.alpha, iso.known_phi, iso.Sbar, iso.warnings, "Sbar");
    if (!grew) {
      iso.full = true;
      return iso;
    }
  }
  throw NonTerminating("monoid extension did not reach a fixed point in " + std::to_string(max_rounds) +
                       " rounds");
}

TransferReport transfer(const BirationalIso& iso, std::span<const Polynomial> gens) {
  if (!iso.full) throw Error("transfer requires a full birational isomorphism");
  TransferReport out;
  out.numerators.resize(gens.size());
  out.denominators.resize(gens.size());
  parallel_for(gens.size(), [&](std::size_t i) {
    if (!same_vars(gens[i].vars(), iso.params())) throw VarTableMismatch();
    RationalFunction r = iso.psi(gens[i]);
    FactoredFraction f;
    try {
      f = factor_denominator(r, iso.S);
    } catch (const DenominatorOutsideMonoid& e) {
      throw Error(std::string("internal consistency failure: full iso produced a denominator outside S (") +
                  e.what() + ")");
    }
    out.numerators[i] = std::move(f.numerator);
    out.denominators[i] = std::move(f.denominator);
  });
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (out.numerators[i].is_zero())
      out.warnings.push_back("generator " + gens[i].to_string() + " transfers to zero");
  return out;
}

}  // namespace ambikit
