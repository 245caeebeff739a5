// Buchberger's algorithm with the Gebauer-Moeller pair criteria and the
// normal selection strategy, plus the ideal operations built on it.
#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ambikit/fraction.hpp"
#include "ambikit/polyring.hpp"

namespace ambikit {

/// Monomial order on a VarTable.
///
/// grevlex and lex are the usual orders. block(k) compares the first k
/// variables by (weighted) grevlex and breaks ties by grevlex on the rest, so
/// it eliminates the first block. `weights`, when set, replaces the total
/// degree in the grevlex comparisons.
struct TermOrder {
  enum class Kind { grevlex, lex, block };
  Kind kind = Kind::grevlex;
  std::size_t split = 0;
  std::vector<std::uint32_t> weights;

  static TermOrder grevlex() { return {}; }
  static TermOrder lex() { return {Kind::lex, 0, {}}; }
  static TermOrder block(std::size_t split) { return {Kind::block, split, {}}; }

  int compare(const Monomial& a, const Monomial& b) const;
  std::uint64_t degree(const Monomial& m) const;  // weighted total degree
  std::string describe() const;
  bool operator==(const TermOrder& o) const = default;
};

/// Cooperative cancellation: checked between S-pair reductions.
class CancelToken {
 public:
  CancelToken() = default;
  static CancelToken after(std::chrono::duration<double> budget);
  void cancel() const;
  bool expired() const;
  /// Throws Cancelled when the deadline passed or cancel() was called.
  void check() const {
    if (expired()) throw Cancelled();
  }

 private:
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::shared_ptr<std::atomic<bool>> flag_ = std::make_shared<std::atomic<bool>>(false);
};

struct IdealGens {
  VarTablePtr vars;
  std::vector<Polynomial> gens;
  TermOrder order;

  IdealGens() = default;
  IdealGens(VarTablePtr v, std::vector<Polynomial> g, TermOrder o = {});
  bool is_zero() const { return gens.empty(); }
};

struct GroebnerBasis {
  VarTablePtr vars;
  std::vector<Polynomial> basis;  // sorted by leading monomial, ascending
  TermOrder order;
  bool reduced = false;

  bool is_unit() const { return basis.size() == 1 && basis[0].is_constant(); }
  IdealGens ideal() const { return IdealGens(vars, basis, order); }
};

struct GbStats {
  std::size_t pairs_considered = 0;
  std::size_t pairs_reduced = 0;
  std::size_t zero_reductions = 0;
};

/// Reduced Groebner basis (each element primitive over the integers with a
/// positive leading coefficient).
GroebnerBasis buchberger(const IdealGens& I, const CancelToken& cancel = {}, GbStats* stats = nullptr);

/// Leading monomial and coefficient of p under an order.
Polynomial::Term leading_term(const Polynomial& p, const TermOrder& order);

/// Remainder of full multivariate division by G over the rationals.
Polynomial normal_form(const Polynomial& f, const GroebnerBasis& G);
bool contains(const GroebnerBasis& G, const Polynomial& f);
bool contains(const GroebnerBasis& G, const IdealGens& J);

/// Every S-pair of G reduces to zero modulo G.
bool is_groebner(const GroebnerBasis& G);

/// I : f^infinity via an auxiliary variable t, the generator 1 - t*f and a
/// block order eliminating t. The result is a reduced grevlex basis.
/// Homogeneous inputs take a faster route through a weighted grevlex basis.
GroebnerBasis saturate(const IdealGens& I, const Polynomial& f, const CancelToken& cancel = {});
/// The auxiliary-variable method regardless of homogeneity.
GroebnerBasis saturate_rabinowitsch(const IdealGens& I, const Polynomial& f, const CancelToken& cancel = {});
/// Left fold of saturate over the generators, repeated until an entire pass
/// leaves the ideal unchanged (when `refold` is set).
GroebnerBasis saturate_monoid(const IdealGens& I, const MonoidGens& S, const CancelToken& cancel = {},
                              bool refold = true);
/// I : f, by intersecting with <f> and dividing.
GroebnerBasis quotient(const IdealGens& I, const Polynomial& f, const CancelToken& cancel = {});
/// I intersected with the ring without `drop`; the result lives over the
/// remaining variables (in their original order) with a grevlex basis.
GroebnerBasis eliminate(const IdealGens& I, std::span<const std::string> drop, const CancelToken& cancel = {});
/// Equality of ideals via reduced grevlex bases.
bool ideal_equal(const IdealGens& I, const IdealGens& J, const CancelToken& cancel = {});

/// Krull dimension of the ideal generated by G (any order): the size of a
/// largest set of variables containing no leading monomial's support.
/// Returns -1 for the unit ideal.
int krull_dimension(const GroebnerBasis& G);

/// Stable 64-bit FNV-1a hash of the basis strings.
std::uint64_t basis_hash(const GroebnerBasis& G);

}  // namespace ambikit
