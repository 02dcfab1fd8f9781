#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace dq {

/// Exact rational number, always kept in canonical (reduced, positive denominator) form.
using Rational = mpq_class;

Rational make_rational(long numerator, long denominator = 1);
std::string to_string(const Rational& r);

/// Largest supported ambient dimension.
inline constexpr int kMaxDim = 8;

/// Exponent vector of length `size()`. Encodes monomials x^a and derivatives d^a.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int dim);
  MultiIndex(std::initializer_list<int> exponents);

  static MultiIndex unit(int dim, int axis);

  int size() const noexcept { return dim_; }
  int operator[](int i) const noexcept { return e_[static_cast<std::size_t>(i)]; }
  void set(int i, int value);
  int order() const noexcept;

  MultiIndex operator+(const MultiIndex& other) const;
  /// Componentwise difference; requires other <= *this componentwise.
  MultiIndex operator-(const MultiIndex& other) const;
  bool divides(const MultiIndex& other) const noexcept;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::uint8_t dim_ = 0;
  std::array<std::uint8_t, kMaxDim> e_{};
};

/// Product of componentwise binomials C(a_i, b_i).
Rational multi_binomial(const MultiIndex& a, const MultiIndex& b);

/// All multi-indices of dimension `dim` with total order <= max_order, in a fixed order.
std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order);

/// Enumerates every decomposition a = g_0 + ... + g_{parts-1} with the multinomial weight
/// prod_i a_i! / (g_0,i! ... g_{parts-1},i!).
void for_each_split(const MultiIndex& a, int parts,
                    const std::function<void(const std::vector<MultiIndex>&, const Rational&)>& fn);

/// Multivariate polynomial over Q in the variables x1..xn.
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, Rational>;

  Polynomial() = default;
  explicit Polynomial(int dim);

  static Polynomial constant(int dim, const Rational& c);
  static Polynomial variable(int dim, int axis);
  static Polynomial monomial(const MultiIndex& exponents, const Rational& c = 1);

  int dim() const noexcept { return dim_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const noexcept;
  Rational coefficient(const MultiIndex& exponents) const;

  void add_term(const MultiIndex& exponents, const Rational& c);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& r);

  Polynomial derivative(int axis) const;
  Polynomial derivative(const MultiIndex& orders) const;

  bool operator==(const Polynomial& other) const;

  std::string to_string() const;

 private:
  void check_dim(const Polynomial& other) const;

  int dim_ = 0;
  Terms terms_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(Polynomial a, const Rational& r);
Polynomial operator*(const Rational& r, Polynomial a);

Polynomial partial_derivative(const Polynomial& p, int axis);

/// Monomials x^a with |a| <= degree.
std::vector<Polynomial> monomial_basis(int dim, int degree);

/// Pretty form of a monomial such as "x1^2*x3" (empty string for the unit monomial).
std::string monomial_string(const MultiIndex& exponents, const char* variable = "x");

}  // namespace dq
