#pragma once

#include <string>
#include <variant>
#include <vector>

#include "dq/hochschild.hpp"
#include "dq/multivector.hpp"

namespace dq {

/// Truncated series sum_{k=0}^{N} h^k f_k.
class FormalFunction {
 public:
  FormalFunction() = default;
  FormalFunction(int dim, int truncation_order);
  static FormalFunction constant_series(const Polynomial& f, int truncation_order);

  int dim() const noexcept { return dim_; }
  int truncation_order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const Polynomial& operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  Polynomial& operator[](int k) { return coeffs_.at(static_cast<std::size_t>(k)); }

  FormalFunction& operator+=(const FormalFunction& other);
  FormalFunction& operator-=(const FormalFunction& other);
  bool operator==(const FormalFunction& other) const = default;

  std::string to_string() const;

 private:
  void check_compatible(const FormalFunction& other) const;

  int dim_ = 0;
  std::vector<Polynomial> coeffs_;
};

FormalFunction operator+(FormalFunction a, const FormalFunction& b);
FormalFunction operator-(FormalFunction a, const FormalFunction& b);

/// f * g = fg + sum_{k=1}^{N} h^k B_k(f, g).
class StarProduct {
 public:
  StarProduct() = default;
  /// b[k-1] = B_k; every entry must be binary.
  StarProduct(int dim, std::vector<PolyDiffOp> b);

  int dim() const noexcept { return dim_; }
  int truncation_order() const noexcept { return static_cast<int>(b_.size()); }
  /// B_k for k in 0..N, with B_0 the pointwise product.
  const PolyDiffOp& b(int k) const;
  const std::vector<PolyDiffOp>& coefficients() const noexcept { return b_; }

  /// The bivector pi with B_1(f,g) = 1/2 pi(df,dg) + symmetric terms, i.e. 2 * skew_symbol(B_1).
  PolyVectorField poisson_bivector() const;
  /// Odd B_k antisymmetric and even B_k symmetric under argument swap.
  bool has_parity_pattern() const;

  StarProduct truncated(int order) const;
  StarProduct extended(const PolyDiffOp& next) const;

 private:
  int dim_ = 0;
  PolyDiffOp mu_;
  std::vector<PolyDiffOp> b_;
};

/// Moyal product of a constant Poisson bivector through order N.
StarProduct moyal_build(const PoissonStructure& pi, int order);

FormalFunction star_multiply(const StarProduct& s, const FormalFunction& f, const FormalFunction& g);

struct MCDefectReport {
  int order = 0;
  PolyDiffOp defect;
  bool is_zero = false;
};

/// delta(B_m) - 1/2 sum_{i+j=m, i,j>=1} [B_i, B_j], the order-m coefficient of the associator.
PolyDiffOp mc_defect(const StarProduct& s, int order);
std::vector<MCDefectReport> verify_mc(const StarProduct& s, int through_order);
bool mc_all_zero(const std::vector<MCDefectReport>& reports);

struct MCExtension {
  PolyDiffOp next;  // B_{n+1}
  StarProduct extended;
};
struct MCExtensionNoneAtBound {
  PolyDiffOp rhs;
  AnsatzBounds bounds;
  std::vector<Rational> certificate;
};
using MCExtendResult = std::variant<MCExtension, MCExtensionNoneAtBound>;

/// Solves delta(B_{n+1}) = 1/2 sum_{i+j=n+1} [B_i, B_j] with n the product's truncation order.
/// Throws MCDefect if the input is not associative through order n, RHSNotClosed if the
/// right-hand side fails to be a cocycle.
MCExtendResult mc_extend(const StarProduct& s, const AnsatzBounds& bounds);

/// Composition of unary operator series truncated at N: (A o B)_n = sum_{a+b=n} A_a o B_b.
/// Index 0 is the leading term.
std::vector<PolyDiffOp> compose_series(const std::vector<PolyDiffOp>& a, const std::vector<PolyDiffOp>& b, int order);
/// Inverse of 1 + h T_1 + ... + h^N T_N.
std::vector<PolyDiffOp> inverse_series(int dim, const std::vector<PolyDiffOp>& t);

/// The product f *' g = T(T^{-1}f * T^{-1}g) for T = 1 + sum h^k T_k; t[k-1] = T_k.
StarProduct gauge_transform(const StarProduct& s, const std::vector<PolyDiffOp>& t);

}  // namespace dq
