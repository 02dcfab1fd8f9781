#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dq/polynomial.hpp"

namespace dq {

/// Sparse row: (column, value) pairs with strictly increasing columns and no zero values.
using SparseRow = std::vector<std::pair<int, Rational>>;

struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<SparseRow> row_data;

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : rows(r), cols(c), row_data(static_cast<std::size_t>(r)) {}

  static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& dense);
  /// Dense product A * x.
  std::vector<Rational> multiply(const std::vector<Rational>& x) const;
  /// Dense product y^T * A.
  std::vector<Rational> left_multiply(const std::vector<Rational>& y) const;
};

struct LinearProblem {
  std::vector<std::string> unknown_basis;
  SparseMatrix equations;
  std::vector<Rational> rhs;

  /// Throws MalformedInput unless column count matches the basis and rhs matches the row count.
  void validate() const;
};

struct Solution {
  std::vector<Rational> particular;
  std::vector<std::vector<Rational>> kernel;
};

/// Left-kernel witness: y^T A = 0 and y^T b != 0.
struct NoSolution {
  std::vector<Rational> certificate;
};

using SolveResult = std::variant<Solution, NoSolution>;

struct SolveOptions {
  bool want_kernel = true;
};

/// Exact sparse row-echelon elimination; pivots on the first nonzero column of each row in
/// input order, free variables are set to zero in the particular solution.
SolveResult linear_solve(const LinearProblem& problem, SolveOptions options = {});

struct InSpan {
  std::vector<Rational> coefficients;
};
struct NotInSpan {
  std::vector<Rational> certificate;
};
using MembershipResult = std::variant<InSpan, NotInSpan>;

MembershipResult membership(const std::vector<Rational>& v, const std::vector<std::vector<Rational>>& generators);

/// Canonical flattened coordinates of a structured value (operator, polyvector, cochain).
using FlatKey = std::vector<int>;
using FlatVector = std::map<FlatKey, Rational>;

void accumulate(FlatVector& into, const FlatVector& from, const Rational& scale = 1);

/// Builds a LinearProblem column by column. Rows are the union of all output coordinates,
/// ordered canonically, so the same inputs always give the same system.
class SystemAssembler {
 public:
  int add_unknown(std::string label, FlatVector image);
  int unknown_count() const noexcept { return static_cast<int>(labels_.size()); }
  LinearProblem build(const FlatVector& rhs) const;

 private:
  std::vector<std::string> labels_;
  std::vector<FlatVector> columns_;
};

}  // namespace dq
