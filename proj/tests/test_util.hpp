// Small helpers shared by the unit tests.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "ambikit/polyring.hpp"

namespace testutil {

using namespace ambikit;

inline Polynomial P(const VarTablePtr& v, const std::string& s) { return Polynomial::parse(v, s); }

/// Random polynomial with small integer coefficients.
inline Polynomial random_poly(const VarTablePtr& vars, std::mt19937_64& rng, int terms, int max_deg,
                              int coeff = 5) {
  std::uniform_int_distribution<int> c(-coeff, coeff);
  std::uniform_int_distribution<int> e(0, max_deg);
  std::uniform_int_distribution<std::size_t> v(0, vars->size() - 1);
  std::vector<Polynomial::Term> out;
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    int d = e(rng);
    for (int k = 0; k < d; ++k) {
      std::size_t i = v(rng);
      m.exp[i]++;
      m.deg++;
    }
    out.emplace_back(m, Rational(c(rng)));
  }
  return Polynomial(vars, std::move(out));
}

}  // namespace testutil
