// Reduced rational functions and localizing monoids.
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ambikit/polyring.hpp"

namespace ambikit {

/// Finite list of monoid generators, pairwise non-associate.
///
/// Generators are stored primitive with positive integer content but keep
/// their sign: a generator such as -m_1_1 is asserted positive on the model,
/// so flipping it to m_1_1 would change what "positive" means.
class MonoidGens {
 public:
  MonoidGens() = default;
  explicit MonoidGens(std::vector<Polynomial> gens);

  /// Appends g unless an associate is already present. Returns true if added.
  bool add(const Polynomial& g);
  bool contains_associate(const Polynomial& g) const;

  std::size_t size() const { return gens_.size(); }
  bool empty() const { return gens_.empty(); }
  const Polynomial& operator[](std::size_t i) const { return gens_[i]; }
  const std::vector<Polynomial>& gens() const { return gens_; }
  auto begin() const { return gens_.begin(); }
  auto end() const { return gens_.end(); }

 private:
  std::vector<Polynomial> gens_;
  std::vector<Polynomial> keys_;  // normalize() of each generator
};

class RationalFunction {
 public:
  RationalFunction() = default;
  /// p / 1.
  explicit RationalFunction(Polynomial p);

  /// Cancels the gcd and normalizes the denominator (primitive, positive
  /// leading coefficient). Throws DivisionByZero on a zero denominator.
  static RationalFunction reduce(Polynomial num, Polynomial den);
  /// As reduce(), but first cancels the listed (presumed irreducible)
  /// factors by trial division; the general gcd runs only when the remaining
  /// denominator does not factor over the hints.
  static RationalFunction reduce(Polynomial num, Polynomial den, const MonoidGens& hints);

  /// Parses `N / D` or `N`.
  static RationalFunction parse(const VarTablePtr& vars, std::string_view text);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  const VarTablePtr& vars() const { return num_.vars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  std::string to_string() const;

  RationalFunction operator-() const;
  bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RationalFunction& o) const { return !(*this == o); }

 private:
  Polynomial num_;
  Polynomial den_;
};

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
/// Throws DivisionByZero when b is zero.
RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);

/// Exact value; throws DivisionByZero if the denominator vanishes.
Rational evaluate(const RationalFunction& r, std::span<const Rational> point);

struct FactoredDenominator {
  std::vector<unsigned> exponents;  // one per generator
  Rational unit = 1;                // always positive
};

struct FactoredFraction {
  Polynomial numerator;
  FactoredDenominator denominator;
};

/// Writes r = N / (unit * prod gen^e) with unit > 0 and N primitive.
/// Throws DenominatorOutsideMonoid if a non-constant cofactor remains.
FactoredFraction factor_denominator(const RationalFunction& r, const MonoidGens& S);

/// Splits p = unit * prod gen^e * cofactor by repeated trial division in
/// generator order. Returns the cofactor; `exponents` is filled in.
Polynomial strip_monoid(const Polynomial& p, const MonoidGens& S, std::vector<unsigned>& exponents);

/// Composes p with an assignment of one rational function per variable of
/// p's table. The result lives over the assignment's table. `hints` speeds
/// up the final reduction when the denominators factor over known generators.
RationalFunction substitute(const Polynomial& p, std::span<const RationalFunction> assignment,
                            const MonoidGens& hints = {});

/// p composed with the assignment, unreduced: num / base^power, where base
/// is an lcm of the denominators of all assignment components (used or not),
/// so two polynomials substituted into the same assignment share a base.
struct PowerFraction {
  Polynomial num;
  Polynomial base;
  unsigned power = 0;
};
PowerFraction substitute_unreduced(const Polynomial& p, std::span<const RationalFunction> assignment);

/// Rewrites entries over one common denominator (an lcm of the entries').
struct CommonDenominator {
  std::vector<Polynomial> numerators;
  Polynomial denominator;
};
CommonDenominator common_denominator(std::span<const RationalFunction> entries);

/// A single term composed with the assignment as one unreduced fraction
/// (numerators[0] / denominator), products of the component fractions.
CommonDenominator substitute_term(const Polynomial& p, std::span<const RationalFunction> assignment);

}  // namespace ambikit
