#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "dq/linear.hpp"
#include "dq/multivector.hpp"
#include "dq/polynomial.hpp"

namespace dq {

/// p-ary polydifferential operator: sum of coeff(x) * d^{a_1} (x) ... (x) d^{a_p}.
class PolyDiffOp {
 public:
  using Slots = std::vector<MultiIndex>;
  using Terms = std::map<Slots, Polynomial>;

  PolyDiffOp() = default;
  PolyDiffOp(int dim, int arity);

  /// The 0-cochain f.
  static PolyDiffOp function(const Polynomial& f);
  /// Pointwise product mu(f, g) = fg.
  static PolyDiffOp multiplication(int dim);
  /// The identity 1-cochain.
  static PolyDiffOp identity(int dim);
  /// A single term coeff * d^{slots[0]} (x) ... .
  static PolyDiffOp term(const Slots& slots, const Polynomial& coeff);

  int dim() const noexcept { return dim_; }
  int arity() const noexcept { return arity_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(const Slots& slots, const Polynomial& coeff);
  /// Largest per-slot derivative order, -1 for zero.
  int max_order() const noexcept;
  /// Largest coefficient degree, -1 for zero.
  int coefficient_degree() const noexcept;

  PolyDiffOp& operator+=(const PolyDiffOp& other);
  PolyDiffOp& operator-=(const PolyDiffOp& other);
  PolyDiffOp& operator*=(const Rational& r);
  bool operator==(const PolyDiffOp& other) const;

  /// Operator with arguments permuted: result(f_1..f_p) = this(f_{perm[0]}, ..., f_{perm[p-1]}).
  PolyDiffOp permuted(const std::vector<int>& perm) const;

  FlatVector flatten() const;
  std::string to_string() const;

 private:
  void check_compatible(const PolyDiffOp& other) const;

  int dim_ = 0;
  int arity_ = 0;
  Terms terms_;
};

PolyDiffOp operator+(PolyDiffOp a, const PolyDiffOp& b);
PolyDiffOp operator-(PolyDiffOp a, const PolyDiffOp& b);
PolyDiffOp operator-(PolyDiffOp a);
PolyDiffOp operator*(const Rational& r, PolyDiffOp a);

/// Evaluates the operator on polynomial arguments.
Polynomial apply(const PolyDiffOp& op, const std::vector<Polynomial>& args);

PolyDiffOp hochschild_delta(const PolyDiffOp& phi);
PolyDiffOp cup(const PolyDiffOp& phi, const PolyDiffOp& psi);
/// phi o_k psi with 1-based position k.
PolyDiffOp circ_k(const PolyDiffOp& phi, const PolyDiffOp& psi, int k);
/// Sum_k (-1)^{(k-1)(q-1)} phi o_k psi.
PolyDiffOp gerstenhaber_composition(const PolyDiffOp& phi, const PolyDiffOp& psi);
/// [phi, psi] = phi o psi - (-1)^{(p-1)(q-1)} psi o phi.
PolyDiffOp gerstenhaber(const PolyDiffOp& phi, const PolyDiffOp& psi);

/// The vector field / function / polyvector as an antisymmetric cochain.
PolyDiffOp hkr_chi(const PolyVectorField& phi);
/// Antisymmetrized first-order part; left inverse of hkr_chi.
PolyVectorField skew_symbol(const PolyDiffOp& phi);

/// The vector field X viewed as a 1-cochain (same as hkr_chi on grade 1).
inline PolyDiffOp as_cochain(const PolyVectorField& x) { return hkr_chi(x); }

struct AnsatzBounds {
  int max_order = 2;    // per-slot derivative order
  int max_degree = 1;   // coefficient degree
};

/// All single-term operators of the given arity within the bounds, in canonical order.
std::vector<PolyDiffOp> polydiff_basis(int dim, int arity, const AnsatzBounds& bounds);

struct Primitive {
  PolyDiffOp psi;
};
struct NoneAtBound {
  AnsatzBounds bounds;
  std::vector<Rational> certificate;
};
using PrimitiveResult = std::variant<Primitive, NoneAtBound>;

/// Default ansatz: order <= 2 + order(phi), degree <= 1 + degree(phi).
AnsatzBounds default_primitive_bounds(const PolyDiffOp& phi);

/// Solves delta(psi) = phi within the bounds. Throws NotClosed unless delta(phi) = 0.
PrimitiveResult cocycle_primitive(const PolyDiffOp& phi, const AnsatzBounds& bounds);

struct HochschildDegreeReport {
  PolyDiffOp input;
  PolyDiffOp differential;
  bool is_cocycle = false;
};
HochschildDegreeReport hochschild_report(const PolyDiffOp& phi);

}  // namespace dq
