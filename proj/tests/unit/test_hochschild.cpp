#include <doctest.h>

#include "generators.hpp"

using namespace dqtest;

namespace {

MultiIndex d(int dim, std::initializer_list<int> axes) {
  MultiIndex m(dim);
  for (int a : axes) m.set(a, m[a] + 1);
  return m;
}

bool agree_on(const PolyDiffOp& a, const PolyDiffOp& b, int degree) {
  for (const auto& args : tuples(monomials(a.dim(), degree), a.arity()))
    if (dq::apply(a, args) != dq::apply(b, args)) return false;
  return true;
}

}  // namespace

TEST_SUITE("hochschild") {

TEST_CASE("apply: product map") {
  CHECK(dq::apply(PolyDiffOp::multiplication(2), {var(2, 0), var(2, 1)}) == var(2, 0) * var(2, 1));
}

TEST_CASE("apply: d1 (x) d2") {
  PolyDiffOp op = PolyDiffOp::term({d(2, {0}), d(2, {1})}, cst(2, 1));
  CHECK(dq::apply(op, {var(2, 0), var(2, 1)}) == cst(2, 1));
  CHECK(dq::apply(op, {var(2, 1), var(2, 0)}).is_zero());
  CHECK(error_code_of([&] { dq::apply(op, {var(2, 0)}); }) == ErrorCode::ArityMismatch);
}

TEST_CASE("apply: Moyal B1 on x1, x2 is one half") {
  StarProduct s = moyal_build(PoissonStructure(symplectic(2)), 1);
  // oracle: 1/2 {x1, x2} with {f,g} = pi(df, dg)
  Polynomial half_bracket = make_rational(1, 2) * symplectic(2).evaluate({var(2, 0), var(2, 1)});
  CHECK(dq::apply(s.b(1), {var(2, 0), var(2, 1)}) == half_bracket);
  CHECK(half_bracket == cst(2, make_rational(1, 2)));
}

TEST_CASE("delta of a vector field vanishes") {
  PolyDiffOp x = hkr_chi(vector_field(2, {{0, var(2, 1) * var(2, 1)}, {1, var(2, 0)}}));
  CHECK(hochschild_delta(x).is_zero());
}

TEST_CASE("delta of a second-order operator") {
  // D = d1^2: dD(f,g) = f D g - D(fg) + D(f) g = -2 d1f d1g
  PolyDiffOp dd = PolyDiffOp::term({d(2, {0, 0})}, cst(2, 1));
  PolyDiffOp expected = PolyDiffOp::term({d(2, {0}), d(2, {0})}, cst(2, -2));
  CHECK(hochschild_delta(dd) == expected);
  Polynomial f = var(2, 0) * var(2, 0) * var(2, 1), g = var(2, 0) + var(2, 1);
  CHECK(dq::apply(hochschild_delta(dd), {f, g}) == delta_by_formula(dd, {f, g}));
}

TEST_CASE("delta of a 0-cochain vanishes") {
  PolyDiffOp f = PolyDiffOp::function(var(2, 0) * var(2, 1) + cst(2, 3));
  PolyDiffOp df = hochschild_delta(f);
  CHECK(df.arity() == 1);
  CHECK(df.is_zero());
}

TEST_CASE("delta matches the alternating sum on samples") {
  Rng r(11);
  for (int t = 0; t < 10; ++t) {
    PolyDiffOp phi = random_polydiff(r, 2, 1 + t % 2, 2, 1);
    auto dphi = hochschild_delta(phi);
    CHECK(dphi.arity() == phi.arity() + 1);
    for (const auto& args : tuples(monomials(2, 1), phi.arity() + 1))
      CHECK(dq::apply(dphi, args) == delta_by_formula(phi, args));
  }
}

TEST_CASE("cup of two vector fields") {
  PolyDiffOp c = cup(PolyDiffOp::term({d(2, {0})}, cst(2, 1)), PolyDiffOp::term({d(2, {1})}, cst(2, 1)));
  CHECK(c.arity() == 2);
  CHECK(dq::apply(c, {var(2, 0), var(2, 1)}) == cst(2, 1));
}

TEST_CASE("cup with the unit") {
  Rng r(5);
  PolyDiffOp phi = random_polydiff(r, 2, 2, 2, 1);
  PolyDiffOp one = PolyDiffOp::function(cst(2, 1));
  CHECK(cup(phi, one) == phi);
  CHECK(cup(one, phi) == phi);
}

TEST_CASE("circ: outer derivative through an inner bidifferential operator") {
  PolyDiffOp outer = PolyDiffOp::term({d(2, {0})}, cst(2, 1));
  PolyDiffOp inner = PolyDiffOp::term({d(2, {0}), d(2, {1})}, var(2, 0));
  PolyDiffOp c = circ_k(outer, inner, 1);
  CHECK(c.arity() == 2);
  // d1 (x1 d1f d2g) = d1f d2g + x1 d1^2 f d2g + x1 d1 f d1d2 g
  PolyDiffOp expected = PolyDiffOp::term({d(2, {0}), d(2, {1})}, cst(2, 1)) +
                        PolyDiffOp::term({d(2, {0, 0}), d(2, {1})}, var(2, 0)) +
                        PolyDiffOp::term({d(2, {0}), d(2, {0, 1})}, var(2, 0));
  CHECK(c == expected);
  for (const auto& args : tuples(monomials(2, 3), 2)) CHECK(dq::apply(c, args) == circ_by_evaluation(outer, inner, 1, args));
  Polynomial x1sq = var(2, 0) * var(2, 0);
  CHECK(dq::apply(c, {x1sq, var(2, 1)}) == Rational(4) * var(2, 0));
}

TEST_CASE("circ: product into product") {
  PolyDiffOp mu = PolyDiffOp::multiplication(2);
  Polynomial f = var(2, 0) + cst(2, 1), g = var(2, 1), h = var(2, 0) * var(2, 1);
  CHECK(dq::apply(circ_k(mu, mu, 1), {f, g, h}) == (f * g) * h);
  CHECK(dq::apply(circ_k(mu, mu, 2), {f, g, h}) == f * (g * h));
}

TEST_CASE("circ: identity") {
  Rng r(9);
  PolyDiffOp phi = random_polydiff(r, 2, 2, 2, 1);
  CHECK(circ_k(PolyDiffOp::identity(2), phi, 1) == phi);
  CHECK(circ_k(phi, PolyDiffOp::identity(2), 2) == phi);
  CHECK(error_code_of([&] { circ_k(phi, phi, 3); }) == ErrorCode::PositionOutOfRange);
  CHECK(error_code_of([&] { circ_k(phi, PolyDiffOp(3, 1), 1); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("bracket of vector fields is the commutator") {
  PolyVectorField x = vector_field(2, {{0, var(2, 1)}}), y = vector_field(2, {{1, var(2, 0) * var(2, 0)}});
  CHECK(gerstenhaber(hkr_chi(x), hkr_chi(y)) == hkr_chi(schouten(x, y)));
  PolyDiffOp c = gerstenhaber(hkr_chi(x), hkr_chi(y));
  for (const auto& f : monomials(2, 3))
    CHECK(dq::apply(c, {f}) == dq::apply(hkr_chi(x), {dq::apply(hkr_chi(y), {f})}) -
                                    dq::apply(hkr_chi(y), {dq::apply(hkr_chi(x), {f})}));
}

TEST_CASE("bracket of the product with itself") {
  PolyDiffOp mu = PolyDiffOp::multiplication(3);
  CHECK(gerstenhaber(mu, mu).is_zero());
}

TEST_CASE("bracket of Moyal B1 with itself is twice delta B2") {
  // constant coefficients do not make [B1,B1] vanish; associativity at order two forces 2 dB2
  StarProduct s = moyal_build(PoissonStructure(symplectic(2)), 2);
  PolyDiffOp sq = gerstenhaber(s.b(1), s.b(1));
  CHECK_FALSE(sq.is_zero());
  CHECK(sq == Rational(2) * hochschild_delta(s.b(2)));
  CHECK(sq.arity() == 3);
}

TEST_CASE("delta and the bracket with the product") {
  Rng r(3);
  PolyDiffOp mu = PolyDiffOp::multiplication(2);
  for (int p = 0; p <= 3; ++p) {
    PolyDiffOp phi = random_polydiff(r, 2, p, 2, 1);
    CHECK(hochschild_delta(phi) == -gerstenhaber(phi, mu));
    if (p % 2 == 0) CHECK(hochschild_delta(phi) == -gerstenhaber(mu, phi));
    else CHECK(hochschild_delta(phi) == gerstenhaber(mu, phi));
  }
}

TEST_CASE("chi of the symplectic bivector") {
  PolyDiffOp c = hkr_chi(symplectic(2));
  CHECK(dq::apply(c, {var(2, 0), var(2, 1)}) == cst(2, 1));
  CHECK(dq::apply(c, {var(2, 1), var(2, 0)}) == cst(2, -1));
}

TEST_CASE("chi of a vector field and a function") {
  PolyVectorField x = vector_field(2, {{0, var(2, 1)}, {1, cst(2, 2)}});
  PolyDiffOp cx = hkr_chi(x);
  CHECK(cx == PolyDiffOp::term({d(2, {0})}, var(2, 1)) + PolyDiffOp::term({d(2, {1})}, cst(2, 2)));
  CHECK(as_cochain(x) == cx);
  CHECK(hkr_chi(PolyVectorField::function(var(2, 0))) == PolyDiffOp::function(var(2, 0)));
}

TEST_CASE("skew symbol sections") {
  CHECK(skew_symbol(hkr_chi(symplectic(2))) == symplectic(2));
  CHECK(skew_symbol(PolyDiffOp::multiplication(2)).is_zero());
  Rng r(21);
  for (int t = 0; t < 5; ++t) CHECK(skew_symbol(hochschild_delta(random_polydiff(r, 2, 1, 2, 2))).is_zero());
  CHECK(skew_symbol(PolyDiffOp::function(var(2, 0))) == PolyVectorField::function(var(2, 0)));
}

TEST_CASE("primitive of an exact cochain") {
  Rng r(4);
  PolyDiffOp psi0 = random_polydiff(r, 2, 1, 2, 1);
  PolyDiffOp phi = hochschild_delta(psi0);
  auto res = cocycle_primitive(phi, AnsatzBounds{2, 1});
  REQUIRE(std::holds_alternative<Primitive>(res));
  CHECK(hochschild_delta(std::get<Primitive>(res).psi) == phi);
}

TEST_CASE("HKR class has no primitive") {
  PolyDiffOp phi = hkr_chi(symplectic(2));
  for (int ord = 0; ord <= 3; ++ord)
    for (int deg = 0; deg <= 2; ++deg) {
      auto res = cocycle_primitive(phi, AnsatzBounds{ord, deg});
      REQUIRE(std::holds_alternative<NoneAtBound>(res));
      CHECK(std::get<NoneAtBound>(res).bounds.max_order == ord);
    }
}

TEST_CASE("zero has the zero primitive") {
  auto res = cocycle_primitive(PolyDiffOp(2, 2), AnsatzBounds{});
  REQUIRE(std::holds_alternative<Primitive>(res));
  CHECK(std::get<Primitive>(res).psi.is_zero());
  CHECK(std::get<Primitive>(res).psi.arity() == 1);
}

TEST_CASE("non-cocycles are refused") {
  PolyDiffOp phi = PolyDiffOp::term({d(2, {0, 0}), MultiIndex(2)}, cst(2, 1));
  CHECK(error_code_of([&] { cocycle_primitive(phi, AnsatzBounds{}); }) == ErrorCode::NotClosed);
  auto rep = hochschild_report(phi);
  CHECK_FALSE(rep.is_cocycle);
  CHECK(rep.differential == hochschild_delta(phi));
}

TEST_CASE("default ansatz and basis") {
  PolyDiffOp phi = PolyDiffOp::term({d(2, {0}), d(2, {1, 1})}, var(2, 0));
  AnsatzBounds b = default_primitive_bounds(phi);
  CHECK(b.max_order == 4);
  CHECK(b.max_degree == 2);
  // unary, order <= 1, degree <= 0 on R^2: three slots, one coefficient
  CHECK(polydiff_basis(2, 1, AnsatzBounds{1, 0}).size() == 3);
  CHECK(polydiff_basis(2, 1, AnsatzBounds{1, 1}).size() == 9);
}

TEST_CASE("permuted arguments") {
  PolyDiffOp op = PolyDiffOp::term({d(2, {0}), d(2, {1})}, cst(2, 1));
  PolyDiffOp sw = op.permuted({1, 0});
  Polynomial f = var(2, 0) * var(2, 1), g = var(2, 0);
  CHECK(dq::apply(sw, {f, g}) == dq::apply(op, {g, f}));
  CHECK(agree_on(sw.permuted({1, 0}), op, 2));
}

TEST_CASE("arity and dimension errors") {
  PolyDiffOp a(2, 1), b(2, 2);
  a.add_term({d(2, {0})}, cst(2, 1));
  b.add_term({d(2, {0}), d(2, {1})}, cst(2, 1));
  CHECK(error_code_of([&] { a += b; }) == ErrorCode::ArityMismatch);
  CHECK(error_code_of([&] { a.add_term({d(2, {0}), d(2, {0})}, cst(2, 1)); }) == ErrorCode::ArityMismatch);
  CHECK(error_code_of([&] { a.add_term({d(3, {0})}, cst(2, 1)); }) == ErrorCode::DimensionMismatch);
  PolyDiffOp zero(2, 0);
  zero += b;
  CHECK(zero == b);
  CHECK(b.max_order() == 1);
  CHECK(b.coefficient_degree() == 0);
  CHECK(PolyDiffOp(2, 2).max_order() == -1);
}

}  // TEST_SUITE
