// Sparse multivariate polynomials over the rationals.
//
// A Polynomial is an immutable-by-convention value: a list of terms sorted
// descending in graded reverse lexicographic order on its VarTable, with no
// zero coefficients. Two polynomials over the same VarTable are equal iff
// their term lists are equal, so structural comparison is exact equality.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ambikit/error.hpp"
#include "ambikit/rational.hpp"

namespace ambikit {

inline constexpr std::size_t kMaxVars = 48;

/// Ordered list of variable names with a reverse index.
class VarTable {
 public:
  VarTable() = default;
  explicit VarTable(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index(std::string_view name) const;  // throws if absent

  bool operator==(const VarTable& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

using VarTablePtr = std::shared_ptr<const VarTable>;

VarTablePtr make_vars(std::vector<std::string> names);
bool same_vars(const VarTablePtr& a, const VarTablePtr& b);

/// Dense exponent vector. Unused trailing slots stay zero.
struct Monomial {
  std::array<std::uint16_t, kMaxVars> exp{};
  std::uint32_t deg = 0;

  static Monomial variable(std::size_t i, std::uint16_t power = 1);

  bool is_one() const { return deg == 0; }
  bool operator==(const Monomial& o) const { return deg == o.deg && exp == o.exp; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }
};

Monomial operator*(const Monomial& a, const Monomial& b);
bool divides(const Monomial& a, const Monomial& b);  // a | b
Monomial quotient(const Monomial& b, const Monomial& a);  // b / a, requires a | b
Monomial lcm(const Monomial& a, const Monomial& b);
Monomial gcd(const Monomial& a, const Monomial& b);
/// -1, 0, +1 under graded reverse lexicographic order.
int grevlex_cmp(const Monomial& a, const Monomial& b);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

class Polynomial {
 public:
  using Term = std::pair<Monomial, Rational>;

  Polynomial() = default;
  explicit Polynomial(VarTablePtr vars) : vars_(std::move(vars)) {}
  /// Takes arbitrary terms; sorts, merges duplicates and drops zeros.
  Polynomial(VarTablePtr vars, std::vector<Term> terms);

  static Polynomial constant(VarTablePtr vars, const Rational& c);
  static Polynomial variable(VarTablePtr vars, std::size_t i);
  static Polynomial variable(VarTablePtr vars, std::string_view name);
  static Polynomial monomial(VarTablePtr vars, const Monomial& m, const Rational& c);
  /// Parses the canonical text form (and any sum of products of
  /// coefficients and powers of variables).
  static Polynomial parse(VarTablePtr vars, std::string_view text);

  const VarTablePtr& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
  bool is_monomial() const { return terms_.size() == 1; }
  /// Constant coefficient value; requires is_constant().
  Rational constant_value() const;
  std::uint32_t total_degree() const;
  std::uint32_t degree_in(std::size_t var) const;
  bool homogeneous() const;
  bool involves(std::size_t var) const;
  const Monomial& leading_monomial() const { return terms_.front().first; }
  const Rational& leading_coefficient() const { return terms_.front().second; }

  std::string to_string() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial scaled(const Rational& c) const;
  Polynomial times_monomial(const Monomial& m, const Rational& c) const;
  Polynomial pow(unsigned e) const;

  bool operator==(const Polynomial& o) const;
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  /// Rewrites the polynomial over another table; `map[i]` is the target
  /// index of source variable i.
  Polynomial embed(VarTablePtr target, std::span<const std::size_t> map) const;
  /// Embeds by variable name into a table that contains every used name.
  Polynomial embed(VarTablePtr target) const;

  // Construction from an already-sorted, zero-free term list.
  static Polynomial from_sorted(VarTablePtr vars, std::vector<Term> terms);

 private:
  VarTablePtr vars_;
  std::vector<Term> terms_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);

inline Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }
inline Polynomial mul(const Polynomial& p, const Polynomial& q) { return p * q; }

/// Positive rational c with p / c primitive over the integers.
Rational content(const Polynomial& p);
/// p / content(p): integer coefficients with gcd 1, sign kept.
Polynomial primitive(const Polynomial& p);
/// Canonical associate: primitive with positive leading coefficient.
Polynomial normalize(const Polynomial& p);
bool associates(const Polynomial& p, const Polynomial& q);

/// Exact quotient p / d, or nullopt if d does not divide p.
std::optional<Polynomial> divide_exact(const Polynomial& p, const Polynomial& d);

/// Greatest common divisor, normalized. gcd(p, 0) = normalize(p).
Polynomial gcd(const Polynomial& p, const Polynomial& q);

/// Exact value at a full rational assignment (indexed by variable).
Rational evaluate(const Polynomial& p, std::span<const Rational> point);
/// Replaces the listed variables by constants, keeping the others.
Polynomial specialize(const Polynomial& p,
                      std::span<const std::pair<std::size_t, Rational>> values);

/// Dense matrix of polynomials sharing one VarTable.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(VarTablePtr vars, std::size_t rows, std::size_t cols);

  static PolyMatrix identity(VarTablePtr vars, std::size_t n);
  /// Symmetric matrix of variables named `<prefix>_i_j` (1-based, i <= j).
  static PolyMatrix symmetric(VarTablePtr vars, std::string_view prefix, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const VarTablePtr& vars() const { return vars_; }
  Polynomial& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Polynomial& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  PolyMatrix submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;
  PolyMatrix transpose() const;

 private:
  VarTablePtr vars_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Polynomial> data_;
};

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b);

/// Exact determinant. Cofactor expansion up to 4x4, Bareiss above.
Polynomial determinant(const PolyMatrix& m);
/// Determinant by Laplace expansion along the first row, any size.
Polynomial cofactor_determinant(const PolyMatrix& m);
/// Determinant by fraction-free Gaussian elimination, any size.
Polynomial bareiss_determinant(const PolyMatrix& m);
/// Determinant of the submatrix with the given rows and columns, in order.
/// Indices are 0-based. Empty index sets give 1.
Polynomial minor(const PolyMatrix& m, std::span<const std::size_t> rows,
                 std::span<const std::size_t> cols);
/// Adjugate (transpose of the cofactor matrix).
PolyMatrix adjugate(const PolyMatrix& m);

}  // namespace ambikit
