#include <doctest.h>

#include "generators.hpp"

using namespace dqtest;

TEST_SUITE("polynomial") {

TEST_CASE("rationals stay canonical") {
  Rational r = make_rational(6, -4);
  CHECK(r.get_num() == -3);
  CHECK(r.get_den() == 2);
  CHECK(to_string(make_rational(10, 5)) == "2");
  CHECK(to_string(make_rational(0, 7)) == "0");
}

TEST_CASE("multi-index basics") {
  MultiIndex a{2, 1, 0};
  CHECK(a.size() == 3);
  CHECK(a.order() == 3);
  MultiIndex b{1, 0, 0};
  CHECK(b.divides(a));
  CHECK_FALSE(a.divides(b));
  CHECK(a - b == MultiIndex{1, 1, 0});
  CHECK(a + b == MultiIndex{3, 1, 0});
  CHECK(MultiIndex::unit(3, 2) == MultiIndex{0, 0, 1});
  CHECK(multi_binomial(MultiIndex{3, 2}, MultiIndex{1, 1}) == 6);
  CHECK(error_code_of([] { MultiIndex(2).set(5, 1); }) == ErrorCode::PositionOutOfRange);
  CHECK(error_code_of([] { MultiIndex(9); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("multi-index enumeration and splits") {
  CHECK(multi_indices_up_to(2, 2).size() == 6);
  CHECK(multi_indices_up_to(3, 0).size() == 1);
  // x^2 split into two parts: (2,0),(1,1),(0,2) with weights 1,2,1
  Rational total = 0;
  int count = 0;
  for_each_split(MultiIndex{2}, 2, [&](const std::vector<MultiIndex>& parts, const Rational& w) {
    CHECK(parts.size() == 2);
    CHECK(parts[0] + parts[1] == MultiIndex{2});
    total += w;
    ++count;
  });
  CHECK(count == 3);
  CHECK(total == 4);
}

TEST_CASE("power rule") {
  const int n = 2;
  Polynomial x2y = var(n, 0) * var(n, 0) * var(n, 1);
  CHECK(x2y.derivative(0) == Rational(2) * var(n, 0) * var(n, 1));
  CHECK(partial_derivative(x2y, 1) == var(n, 0) * var(n, 0));
  CHECK(x2y.derivative(MultiIndex{2, 1}) == cst(n, 2));
  CHECK(x2y.derivative(MultiIndex{3, 0}).is_zero());
}

TEST_CASE("difference of squares") {
  const int n = 2;
  Polynomial x = var(n, 0), y = var(n, 1);
  CHECK((x + y) * (x - y) == x * x - y * y);
}

TEST_CASE("independent variable") {
  CHECK(var(2, 0).derivative(1).is_zero());
}

TEST_CASE("degree, coefficients and cancellation") {
  const int n = 3;
  Polynomial p = var(n, 0) * var(n, 2) + make_rational(1, 2) * var(n, 1);
  CHECK(p.degree() == 2);
  CHECK(p.coefficient(MultiIndex{0, 1, 0}) == make_rational(1, 2));
  CHECK(p.coefficient(MultiIndex{1, 1, 1}) == 0);
  p -= var(n, 0) * var(n, 2);
  CHECK(p.terms().size() == 1);
  p.add_term(MultiIndex{0, 1, 0}, make_rational(-1, 2));
  CHECK(p.is_zero());
  CHECK(p.degree() == -1);
  p.add_term(MultiIndex{1, 0, 0}, 0);
  CHECK(p.is_zero());
}

TEST_CASE("scaling and negation") {
  const int n = 1;
  Polynomial p = var(n, 0) + cst(n, 3);
  CHECK(Rational(0) * p == Polynomial(n));
  CHECK(-p + p == Polynomial(n));
  Polynomial q = p;
  q *= make_rational(2, 3);
  CHECK(q.coefficient(MultiIndex{0}) == 2);
}

TEST_CASE("printing") {
  CHECK(monomial_string(MultiIndex{2, 0, 1}) == "x1^2*x3");
  CHECK(monomial_string(MultiIndex{0, 0}) == "");
  CHECK(Polynomial(2).to_string() == "0");
}

TEST_CASE("monomial basis") {
  CHECK(monomial_basis(2, 3).size() == 10);
  CHECK(monomial_basis(4, 1).size() == 5);
}

TEST_CASE("dimension mismatch is an error") {
  CHECK(error_code_of([] { return var(2, 0) + var(3, 0); }) == ErrorCode::DimensionMismatch);
  CHECK(error_code_of([] { return var(2, 0) * var(3, 0); }) == ErrorCode::DimensionMismatch);
  CHECK(error_code_of([] { return var(2, 0).derivative(4); }) == ErrorCode::PositionOutOfRange);
  CHECK(error_code_of([] { return Polynomial::variable(0, 0); }) == ErrorCode::DimensionMismatch);
}

}  // TEST_SUITE
