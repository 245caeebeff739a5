// Exact integer and rational scalars (GMP).
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ambikit {

using Integer = mpz_class;
using Rational = mpq_class;

inline int sign(const Rational& q) { return sgn(q); }
inline int sign(const Integer& z) { return sgn(z); }

/// `a/b` with `/1` suppressed.
inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Parses `a` or `a/b` (optionally signed); throws ParseError on bad input.
Rational parse_rational(std::string_view text);

}  // namespace ambikit
