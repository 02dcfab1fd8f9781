#pragma once

#include <string>
#include <variant>
#include <vector>

#include "dq/hochschild.hpp"
#include "dq/lie_algebra.hpp"
#include "dq/star_product.hpp"

namespace dq {

struct LiftBounds {
  AnsatzBounds ansatz{3, 3};  // search space for each new correction term
  int class_degree = 3;       // coefficient degree for cohomology-class verdicts
};

/// X_0 + h X_1 + ... + h^N X_N as unary operators, X_0 a vector field.
struct DerivationSeries {
  StarProduct star;
  std::vector<PolyDiffOp> terms;
  int certified_order = -1;
  /// Orders at which the previous term was adjusted by a vector field.
  std::vector<int> perturbed_orders;
};

enum class ObstructionKind { HochschildRhsNotClosed, PoissonClass, BicomplexClass, ChevalleyClass };
std::string_view to_string(ObstructionKind kind);

/// One cohomology class extracted from a failed step, with its truncated verdict.
struct ObstructionClass {
  ObstructionKind kind = ObstructionKind::PoissonClass;
  PolyVectorField polyvector;       // PoissonClass
  BicomplexElement cochains;        // BicomplexClass / ChevalleyClass
  bool representative_closed = false;
  bool verdict_attempted = false;
  bool trivial_at_bound = false;
  int degree_bound = 0;
  bool restricted = false;
  std::vector<Rational> certificate;
  /// Primitive found when trivial_at_bound (printable form).
  std::string primitive;
};

struct ObstructionReport {
  int order = 0;
  AnsatzBounds ansatz;
  std::vector<ObstructionClass> classes;
  /// Terms computed before the failure (orders 0..order-1).
  std::vector<PolyDiffOp> partial_terms;

  /// True when some class is nontrivial at its bound (a genuine obstruction at this truncation).
  bool has_nontrivial_class() const;
};

using LiftFieldResult = std::variant<DerivationSeries, ObstructionReport>;

/// Orders n at which sum_{k=0}^{n} [B_k, X_{n-k}] vanishes consecutively from 0; returns the last one.
int derivation_certified_order(const StarProduct& star, const std::vector<PolyDiffOp>& terms);

/// Throws MCDefect for a non-associative product, NotPoissonField for a non-Poisson x0,
/// RHSNotClosed / IntegrityFailure for broken invariants, AnsatzExhausted when the search space
/// is too small although the class vanishes.
LiftFieldResult lift_vector_field(const StarProduct& star, const PolyVectorField& x0, int order, const LiftBounds& bounds);

/// The class of [B_2, X_0] projected to a Poisson cocycle, with its verdict.
ObstructionReport obstruction_first(const StarProduct& star, const PolyVectorField& x0, int class_degree);

struct ActionSeries {
  StarProduct star;
  Action action;
  /// phi[n][i] = phi_n(e_i).
  std::vector<std::vector<PolyDiffOp>> phi;
  int certified_order_derivation = -1;
  int certified_order_homomorphism = -1;
  std::vector<std::string> warnings;

  int order() const noexcept { return static_cast<int>(phi.size()) - 1; }
  /// Recomputes both certification flags from the stored terms.
  void recertify();
};

using LiftActionResult = std::variant<ActionSeries, ObstructionReport>;

LiftActionResult lift_action(const StarProduct& star, const Action& action, int order, const LiftBounds& bounds);

/// [Phi(xi), Phi(eta)] - Phi([xi, eta]) for orders 0..certified_order_derivation.
std::vector<PolyDiffOp> commutator_defect(const ActionSeries& series, int xi, int eta);

struct InnerResult {
  FormalFunction f;
};
struct NotInnerAtBound {
  int degree_bound = 0;
  std::vector<Rational> certificate;
};
using InnerDerivationResult = std::variant<InnerResult, NotInnerAtBound>;

/// Solves d = ad_f, ad_f(g) = f*g - g*f, for f with coefficient degree <= degree_bound.
/// d[n] is the h^n term. Throws NotADerivation when d fails the derivation rule.
InnerDerivationResult inner_derivation_solve(const StarProduct& star, const std::vector<PolyDiffOp>& d, int degree_bound);

}  // namespace dq
