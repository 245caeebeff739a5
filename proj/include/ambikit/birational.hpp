// Birational isomorphisms between localized polynomial rings.
//
// alpha maps parameters to model coordinates and beta maps back. Pullbacks
// go the other way: phi = alpha* sends a polynomial in the model
// coordinates to a fraction in the parameters, psi = beta* sends a
// parameter polynomial to a fraction in the model coordinates.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "ambikit/fraction.hpp"

namespace ambikit {

struct RationalMap {
  VarTablePtr domain;
  VarTablePtr codomain;
  std::vector<RationalFunction> components;  // over domain, one per codomain variable

  /// p (over codomain) composed with the map; a fraction over domain.
  RationalFunction pullback(const Polynomial& p, const MonoidGens& hints = {}) const;
  /// Image of a domain point. Throws DivisionByZero at a pole.
  std::vector<Rational> operator()(std::span<const Rational> point) const;
};

struct BirationalIso {
  RationalMap alpha;  // parameters -> model
  RationalMap beta;   // model -> parameters
  MonoidGens S;       // over model coordinates
  MonoidGens Sbar;    // over parameters
  bool full = false;
  std::vector<std::string> warnings;
  /// Closed-form images of selected polynomials (determinant identities and
  /// the like). phi/psi return these instead of substituting; they are
  /// spot-checked by check_known_images().
  std::vector<std::pair<Polynomial, RationalFunction>> known_phi, known_psi;

  const VarTablePtr& params() const { return alpha.domain; }
  const VarTablePtr& model() const { return beta.domain; }

  /// phi = alpha*: model polynomial -> parameter fraction.
  RationalFunction phi(const Polynomial& f) const;
  /// psi = beta*: parameter polynomial -> model fraction.
  RationalFunction psi(const Polynomial& g) const;
};

/// Compares each known image with the substituted map at random integer
/// points (points at poles are skipped). Returns the failures as text.
std::vector<std::string> check_known_images(const BirationalIso& iso, std::uint64_t seed = 0, unsigned trials = 8);

/// Checks the table layout and that every component denominator factors
/// over the matching monoid. Throws Error describing the first violation.
void validate(const BirationalIso& iso);

struct ComponentFailure {
  std::string variable;
  std::string residual;  // composed fraction minus the variable
};

struct VerificationReport {
  bool ok = true;
  std::vector<ComponentFailure> failures;       // beta after alpha
  std::vector<ComponentFailure> back_failures;  // alpha after beta (when requested)
};

/// Exact symbolic check of beta(alpha(x)) = x, optionally also alpha(beta(y)) = y.
VerificationReport verify_inverse(const BirationalIso& iso, bool both_directions = false);

/// Grows S and Sbar until each generator of one side maps to a unit times
/// a monoid element of the other. Throws NonTerminating past max_rounds.
BirationalIso extend_to_full(BirationalIso iso, unsigned max_rounds = 10);

struct TransferReport {
  std::vector<Polynomial> numerators;
  std::vector<FactoredDenominator> denominators;
  std::vector<std::string> warnings;
};

/// num psi(g) for each g, sign preserved. Requires a full iso.
TransferReport transfer(const BirationalIso& iso, std::span<const Polynomial> gens);

}  // namespace ambikit
