#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dq/linear.hpp"
#include "dq/polynomial.hpp"

namespace dq {

/// Set of 0-based indices {i1 < ... < ip}, stored as a bit mask.
using IndexMask = std::uint32_t;

int mask_size(IndexMask m) noexcept;
std::vector<int> mask_indices(IndexMask m);
IndexMask indices_mask(const std::vector<int>& indices);
/// Sign of xi_a xi_b against xi_{a|b}; 0 when the sets overlap.
int wedge_sign(IndexMask a, IndexMask b) noexcept;
/// All masks of exactly `grade` elements drawn from 0..dim-1, in increasing mask order.
std::vector<IndexMask> masks_of_grade(int dim, int grade);

/// Polyvector field of fixed grade with polynomial coefficients. Component (i1<...<ip)
/// stands for coeff * d_{i1} ^ ... ^ d_{ip}; grade 0 is a bare function.
class PolyVectorField {
 public:
  using Components = std::map<IndexMask, Polynomial>;

  PolyVectorField() = default;
  PolyVectorField(int dim, int grade);

  static PolyVectorField function(const Polynomial& f);
  /// The basis vector field d_{axis} (0-based).
  static PolyVectorField basis(int dim, int axis);

  int dim() const noexcept { return dim_; }
  int grade() const noexcept { return grade_; }
  const Components& components() const noexcept { return components_; }
  bool is_zero() const noexcept { return components_.empty(); }

  Polynomial component(IndexMask m) const;
  /// 0-based increasing index tuple.
  Polynomial component(const std::vector<int>& indices) const;
  void add_component(IndexMask m, const Polynomial& p);
  void add_component(const std::vector<int>& indices, const Polynomial& p);

  /// Largest coefficient degree, -1 for zero.
  int degree() const noexcept;

  PolyVectorField& operator+=(const PolyVectorField& other);
  PolyVectorField& operator-=(const PolyVectorField& other);
  PolyVectorField& operator*=(const Rational& r);
  /// Multiplies every coefficient by a function (same as wedge with a grade-0 field).
  PolyVectorField& operator*=(const Polynomial& f);

  bool operator==(const PolyVectorField& other) const;

  /// Phi(df_1, ..., df_p): determinant pairing with the differentials.
  Polynomial evaluate(const std::vector<Polynomial>& fs) const;

  FlatVector flatten() const;
  std::string to_string() const;

 private:
  void check_compatible(const PolyVectorField& other) const;

  int dim_ = 0;
  int grade_ = 0;
  Components components_;
};

PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b);
PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b);
PolyVectorField operator-(PolyVectorField a);
PolyVectorField operator*(const Rational& r, PolyVectorField a);

PolyVectorField wedge(const PolyVectorField& a, const PolyVectorField& b);

/// Schouten bracket. [X, f] = X(f), [X, Y] is the commutator, graded Leibniz for wedge.
PolyVectorField schouten(const PolyVectorField& a, const PolyVectorField& b);

/// A grade-2 field with vanishing Schouten square (verified at construction).
class PoissonStructure {
 public:
  explicit PoissonStructure(PolyVectorField bivector);
  const PolyVectorField& bivector() const noexcept { return pi_; }
  int dim() const noexcept { return pi_.dim(); }
  bool has_constant_coefficients() const noexcept { return pi_.degree() <= 0; }

 private:
  PolyVectorField pi_;
};

/// d_pi(y) = [pi, y].
PolyVectorField lichnerowicz_d(const PoissonStructure& pi, const PolyVectorField& y);

struct PoissonTrivial {
  PolyVectorField primitive;
  int degree_bound = 0;
};
struct PoissonNontrivialAtBound {
  std::vector<Rational> certificate;
  int degree_bound = 0;
};
using PoissonVerdict = std::variant<PoissonTrivial, PoissonNontrivialAtBound>;

/// Looks for w of grade p-1, coefficient degree <= bound, with d_pi(w) = z.
/// Throws NotClosed when d_pi(z) != 0.
PoissonVerdict poisson_class_is_trivial(const PoissonStructure& pi, const PolyVectorField& z, int degree_bound);

/// All fields of the given grade whose single coefficient is a monomial of degree <= bound.
std::vector<PolyVectorField> polyvector_basis(int dim, int grade, int degree_bound);

}  // namespace dq
