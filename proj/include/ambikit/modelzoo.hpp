// Builders for the model families: linear concentration models, Gaussian
// structural equation models (plain, colored, confounded, interventional),
// staged trees and Lyapunov models.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ambikit/birational.hpp"

namespace ambikit {

/// Sampling range for one parameter: values k / den for k in [lo, hi].
struct SampleBox {
  long lo = -10;
  long hi = 10;
  long den = 4;

  std::size_t count() const { return static_cast<std::size_t>(hi - lo + 1); }
  bool operator==(const SampleBox&) const = default;
};

/// A parameter space together with the isomorphism onto the model space.
///
/// The parameter space is cut out by eq_gens = 0, ineq_gens >= 0,
/// noneq_gens != 0 and Sbar > 0, all over iso.params().
struct ModelSpec {
  std::string label;
  BirationalIso iso;
  std::vector<Polynomial> eq_gens;
  std::vector<Polynomial> ineq_gens;
  std::vector<Polynomial> noneq_gens;
  std::vector<std::string> eq_labels, ineq_labels, noneq_labels;
  std::vector<SampleBox> boxes;  // one per parameter
  /// Caller asserts that eq_gens generate a prime ideal even if non-linear.
  bool prime_asserted = false;

  void add_eq(Polynomial p, std::string why);
  void add_ineq(Polynomial p, std::string why);
  void add_noneq(Polynomial p, std::string why);
  bool linear_equations() const;
};

enum class EdgeKind { undirected, directed, bidirected };

struct Edge {
  std::size_t a = 0, b = 0;  // 1-based vertex labels
  EdgeKind kind = EdgeKind::undirected;
  bool operator==(const Edge&) const = default;
};

using VertexPair = std::pair<std::size_t, std::size_t>;

struct GraphSpec {
  std::size_t n = 0;
  std::vector<Edge> edges;
  /// Each class lists vertices (or edges) sharing one color.
  std::vector<std::vector<std::size_t>> vertex_classes;
  std::vector<std::vector<VertexPair>> edge_classes;
  /// Intervention targets I_1, ..., I_m; the observational I_0 is implicit.
  std::vector<std::vector<std::size_t>> interventions;
  /// kappa_ij <= 0 on every edge (concentration models).
  bool nonpositive_partials = false;
  /// omega'_ii >= omega_ii on targeted vertices (interventional models).
  bool monotone = false;

  bool has_edge(std::size_t i, std::size_t j, EdgeKind kind) const;
  std::vector<std::size_t> parents(std::size_t j) const;  // directed, sorted
};

struct StagedTreeSpec {
  /// Internal vertices as path words (child indices as digits) with their
  /// number of children. The root is the empty word.
  std::vector<std::pair<std::string, std::size_t>> internal;
  std::vector<std::vector<std::string>> stages;
  /// Optional: the variable decided at each level, and the variable order
  /// used to name leaf probabilities. Trees over the same variables in
  /// different orders then share model coordinates.
  std::vector<std::string> levels;
  std::vector<std::string> outcome_order;

  /// Uniform tree with the given arity per level.
  static StagedTreeSpec uniform(const std::vector<std::size_t>& arities);
  std::size_t children(const std::string& v) const;  // 0 for leaves
  std::vector<std::string> leaves() const;            // in word order
};

struct LyapunovSpec {
  std::size_t n = 3;
  /// Allowed drift entries (row, column), 1-based. Empty means lower
  /// triangular with self-loops.
  std::vector<VertexPair> support;
  /// Symmetric positive definite; empty means the identity.
  std::vector<std::vector<Rational>> C;
  /// Extra linear relations among the m_i_j, as polynomial text.
  std::vector<std::string> extra_eq;
  /// Required for supports other than the lower-triangular one.
  bool assert_positive = false;
};

// Variable names.
std::string sigma_name(std::size_t i, std::size_t j, const std::string& prefix = "s");

ModelSpec build_concentration(const GraphSpec& g);
ModelSpec build_sem(const GraphSpec& g);
ModelSpec build_staged_tree(const StagedTreeSpec& t);
ModelSpec build_lyapunov(const LyapunovSpec& l);

/// |Sigma_{ij|C}|: rows {i} u C, columns {j} u C (0-based, C sorted).
Polynomial conditional_minor(const PolyMatrix& m, std::size_t i, std::size_t j, const std::vector<std::size_t>& C);
/// Leading principal minor |Sigma_[k]| (k = 0 gives 1).
Polynomial leading_minor(const PolyMatrix& m, std::size_t k);

/// B(M) = I (x) M + M (x) I over the parameters of a Lyapunov model
/// (n^2 x n^2, pairs in row-major order).
PolyMatrix lyapunov_kronecker(const ModelSpec& lyapunov);
/// The square subsystem A(Sigma) whose Cramer solution recovers M. Rows
/// are the pairs k <= l, columns the drift parameters in table order.
PolyMatrix lyapunov_recovery_matrix(const ModelSpec& lyapunov);

}  // namespace ambikit
