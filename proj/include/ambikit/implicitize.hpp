// Markov properties, vanishing ideals, point checks, model equivalence and
// randomized vanishing tests for ambirational models.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ambikit/groebner.hpp"
#include "ambikit/modelzoo.hpp"

namespace ambikit {

struct MarkovProperty {
  VarTablePtr vars;
  std::vector<Polynomial> equations;     // = 0
  std::vector<Polynomial> inequalities;  // >= 0
  std::vector<Polynomial> inequations;   // != 0
  std::vector<Polynomial> positivities;  // > 0
  std::vector<std::string> equation_sources, inequality_sources, inequation_sources, positivity_sources;
  /// The interior parameter point that certified nonemptiness.
  std::vector<Rational> witness;
  std::vector<std::string> warnings;

  std::size_t size() const {
    return equations.size() + inequalities.size() + inequations.size() + positivities.size();
  }
};

/// Draws exact interior points of a model's parameter space.
///
/// Linear equations are solved for pivot variables; the free variables are
/// drawn from their boxes and the point is kept only when every S-bar
/// generator is positive, every inequality generator non-negative and every
/// inequation generator non-zero.
class ParameterSampler {
 public:
  ParameterSampler(const ModelSpec& m, std::uint64_t seed, std::size_t budget = 5000);

  /// Next interior point, or nullopt once the rejection budget is spent.
  std::optional<std::vector<Rational>> next();
  /// As next(), but throws RegionSamplingExhausted.
  std::vector<Rational> require();
  bool in_region(const std::vector<Rational>& theta) const;
  std::size_t free_count() const { return free_.size(); }
  /// Number of values per free coordinate (the smallest box).
  std::size_t min_box() const;

 private:
  const ModelSpec& m_;
  std::mt19937_64 rng_;
  std::size_t budget_;
  std::vector<std::size_t> free_;
  // pivot variable -> constant + sum coeff * free variable
  std::vector<std::pair<std::size_t, std::vector<Rational>>> pivots_;
};

struct ImplicitOptions {
  std::uint64_t seed = 0;
  std::size_t sample_budget = 5000;
};

MarkovProperty markov_property(const ModelSpec& m, const ImplicitOptions& opts = {});

/// <num psi(f) : f in eq_gens> : S^infinity as a reduced grevlex basis.
GroebnerBasis vanishing_ideal(const ModelSpec& m, const CancelToken& cancel = {});
/// The vanishing ideal by eliminating the parameters from the graph of alpha.
GroebnerBasis elimination_vanishing_ideal(const ModelSpec& m, const CancelToken& cancel = {});
/// Gaussian DAG models only: the local Markov statements |Sigma_{ij|pa(j)}|
/// for non-edges, folded through saturations at the parental minors.
GroebnerBasis dag_local_markov_ideal(const GraphSpec& g, const CancelToken& cancel = {});

enum class Verdict { holds, fails };

struct PointCheck {
  std::string kind;  // equation, inequality, inequation, positivity
  std::string source;
  Verdict verdict = Verdict::holds;
  Rational value;
};

std::vector<PointCheck> check_point(const MarkovProperty& mp, std::span<const Rational> x);

enum class EquivMode { exact, zariski };
enum class EquivResult { equivalent, inequivalent, undecided };

struct Certificate {
  std::string direction;   // "1->2" or "2->1"
  std::string kind;        // equation, inequality, inequation, positivity
  std::string constraint;  // over the model variables
  std::string source;
  std::string residual;    // nonzero normal form of the pullback, if symbolic
  std::vector<Rational> point;  // violating parameter point, if sampled
};

struct EquivalenceVerdict {
  EquivResult result = EquivResult::equivalent;
  bool sampled = false;  // some sub-verdict rests on sampling
  std::vector<Certificate> certificates;
  std::vector<std::string> notes;
};

/// Cross-checks the Markov properties: every constraint of one model is
/// pulled back along the other model's alpha. Equations are decided by
/// normal forms against the other parameter-side ideal; inequalities and
/// inequations by sampling, which can only refute.
EquivalenceVerdict model_equiv(const ModelSpec& m1, const ModelSpec& m2, EquivMode mode = EquivMode::exact,
                               const ImplicitOptions& opts = {}, std::size_t trials = 50);

/// Re-verifies a certificate independently.
bool verify_certificate(const Certificate& c, const ModelSpec& m1, const ModelSpec& m2);

struct SzResult {
  bool probably_zero = true;
  double bound = 0;  // per-trial failure probability bound
  std::vector<Rational> witness;  // parameter point with phi(F) != 0
  Rational value;
};

SzResult sz_vanishes(const Polynomial& F, const ModelSpec& m, std::size_t trials, std::uint64_t seed);

}  // namespace ambikit
