#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dq/hochschild.hpp"
#include "dq/multivector.hpp"

namespace dq {

/// Finite-dimensional Lie algebra [e_i, e_j] = sum_k c^k_{ij} e_k (0-based indices).
class LieAlgebra {
 public:
  LieAlgebra() = default;
  /// c[i][j][k] = c^k_{ij}. Throws InvalidLieAlgebra naming the offending triple.
  LieAlgebra(int dim, std::vector<std::vector<std::vector<Rational>>> constants);

  /// Builds from the listed brackets [e_i, e_j] = sum_k v_k e_k (i < j), the rest by antisymmetry.
  static LieAlgebra from_brackets(int dim, const std::vector<std::pair<std::pair<int, int>, std::vector<Rational>>>& brackets);

  int dim() const noexcept { return dim_; }
  const Rational& c(int i, int j, int k) const;
  bool is_abelian() const;

 private:
  int dim_ = 0;
  std::vector<std::vector<std::vector<Rational>>> c_;
};

/// pi = sum_{i<j} c^k_{ij} x_k d_i ^ d_j, so {x_i, x_j} = c^k_{ij} x_k.
PoissonStructure kirillov_kostant(const LieAlgebra& g);

/// phi_0(e_i) as vector fields, validated as a homomorphism.
class Action {
 public:
  Action() = default;
  /// Throws NotHomomorphism with the witness pair.
  Action(LieAlgebra g, std::vector<PolyVectorField> images);

  const LieAlgebra& algebra() const noexcept { return g_; }
  const std::vector<PolyVectorField>& images() const noexcept { return images_; }
  const PolyVectorField& image(int i) const { return images_.at(static_cast<std::size_t>(i)); }
  int ambient_dim() const noexcept { return ambient_dim_; }

 private:
  LieAlgebra g_;
  std::vector<PolyVectorField> images_;
  int ambient_dim_ = 0;
};

enum class CoefficientKind { Polynomial, PolyVector, PolyDiff };

std::string_view to_string(CoefficientKind kind);

using CoefficientValue = std::variant<Polynomial, PolyVectorField, PolyDiffOp>;

/// Alternating p-cochain on g; only increasing tuples (bit masks over the Lie basis) are stored.
class CECochain {
 public:
  CECochain() = default;
  CECochain(int algebra_dim, int degree, CoefficientKind kind);

  int algebra_dim() const noexcept { return algebra_dim_; }
  int degree() const noexcept { return degree_; }
  CoefficientKind kind() const noexcept { return kind_; }
  const std::map<IndexMask, CoefficientValue>& values() const noexcept { return values_; }

  /// Value on an increasing tuple; nullopt when absent (zero).
  const CoefficientValue* value(IndexMask tuple) const;
  /// Value on an arbitrary ordered tuple, with the permutation sign; nullopt when zero.
  std::optional<CoefficientValue> evaluate(const std::vector<int>& tuple) const;

  void add_value(IndexMask tuple, const CoefficientValue& v);
  void add_value(const std::vector<int>& increasing, const CoefficientValue& v);

  bool is_zero() const noexcept { return values_.empty(); }
  bool operator==(const CECochain& other) const;
  CECochain& operator+=(const CECochain& other);
  CECochain& operator*=(const Rational& r);

  FlatVector flatten() const;
  std::string to_string() const;

 private:
  int algebra_dim_ = 0;
  int degree_ = 0;
  CoefficientKind kind_ = CoefficientKind::Polynomial;
  std::map<IndexMask, CoefficientValue> values_;
};

CECochain operator+(CECochain a, const CECochain& b);
CECochain operator*(const Rational& r, CECochain a);

bool is_zero_value(const CoefficientValue& v);
CoefficientKind kind_of(const CoefficientValue& v);
/// xi . v: derivation, Schouten bracket, or Gerstenhaber bracket with phi_0(xi).
CoefficientValue act(const PolyVectorField& field, const CoefficientValue& v);

/// Standard alternating differential of a cochain under the action.
CECochain ce_differential(const Action& action, const CECochain& c);

struct PoissonActionCheck {
  bool is_poisson = true;
  /// (basis index, [phi_0(e_i), pi]) for each failing generator.
  std::vector<std::pair<int, PolyVectorField>> witnesses;
};
PoissonActionCheck action_is_poisson(const Action& action, const PoissonStructure& pi);
/// [X, pi]; zero iff X is a Poisson vector field.
PolyVectorField poisson_witness(const PolyVectorField& x, const PoissonStructure& pi);

/// An element of the total complex: a list of polyvector-valued cochains of various bidegrees.
using BicomplexElement = std::vector<CECochain>;

/// D = d_g + (-1)^p d_pi applied componentwise, with components regrouped by bidegree.
BicomplexElement bicomplex_total_d(const Action& action, const PoissonStructure& pi, const BicomplexElement& c);
bool is_zero(const BicomplexElement& e);

struct BicomplexTrivial {
  BicomplexElement primitive;
  int degree_bound = 0;
  bool restricted = false;
};
struct BicomplexNontrivialAtBound {
  std::vector<Rational> certificate;
  int degree_bound = 0;
  bool restricted = false;
};
using BicomplexVerdict = std::variant<BicomplexTrivial, BicomplexNontrivialAtBound>;

/// Solves D c = element in total degree one lower. `restricted` keeps only components with
/// p >= 1 and q >= 1. Throws NotClosed unless D(element) = 0.
BicomplexVerdict bicomplex_class_is_trivial(const Action& action, const PoissonStructure& pi,
                                            const BicomplexElement& element, int degree_bound, bool restricted);

struct ChevalleyTrivial {
  CECochain primitive;
  int degree_bound = 0;
};
struct ChevalleyNontrivialAtBound {
  std::vector<Rational> certificate;
  int degree_bound = 0;
};
using ChevalleyVerdict = std::variant<ChevalleyTrivial, ChevalleyNontrivialAtBound>;

/// Solves d_g c = element for a polyvector-valued cochain c of one degree lower and the given grade.
ChevalleyVerdict chevalley_class_is_trivial(const Action& action, const CECochain& element, int value_grade,
                                            int degree_bound);

}  // namespace dq
