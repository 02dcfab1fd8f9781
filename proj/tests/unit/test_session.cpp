#include <doctest.h>

#include <cstdlib>

#include "generators.hpp"
#include "dq/expression.hpp"
#include "dq/session.hpp"

using namespace dqtest;

namespace {

// ParseError location of a failing parse, or {0,0} when it parsed
struct Failure {
  ErrorCode code = ErrorCode::UsageError;
  int line = 0;
  int column = 0;
  std::string token;
};

Failure parse_failure(const std::string& text) {
  try {
    parse_session(text);
  } catch (const ParseError& e) {
    return {e.code(), e.line(), e.column(), e.token()};
  }
  return {};
}

struct EnvOrder {
  explicit EnvOrder(const char* v) {
    if (v) setenv("DQ_DEFAULT_ORDER", v, 1);
    else unsetenv("DQ_DEFAULT_ORDER");
  }
  ~EnvOrder() { unsetenv("DQ_DEFAULT_ORDER"); }
};

}  // namespace

TEST_SUITE("session") {

TEST_CASE("expressions") {
  CHECK(value_as_polynomial(parse_expression("x1", 2), 2) == var(2, 0));
  CHECK(value_as_polynomial(parse_expression("3/2*x1^2*x2 - x2", 2), 2) ==
        Rational(3, 2) * var(2, 0) * var(2, 0) * var(2, 1) - var(2, 1));
  PolyVectorField pi = value_as_polyvector(parse_expression("d1^d2", 2), 2);
  CHECK(pi == symplectic(2));
  PolyDiffOp t = value_as_operator(parse_expression("x1*(d[1]|d[2])", 2), 2, 2);
  CHECK(t.arity() == 2);
  CHECK(dq::apply(t, {var(2, 0), var(2, 1)}) == var(2, 0));
  CHECK(dq::apply(t, {var(2, 1), var(2, 0)}).is_zero());
}

TEST_CASE("expression kinds") {
  CHECK(error_code_of([] { value_as_polynomial(parse_expression("d1", 2), 2); }) == ErrorCode::KindMismatch);
  CHECK(error_code_of([] { value_as_polyvector(parse_expression("(d[1]|d[2])", 2), 2); }) == ErrorCode::KindMismatch);
  CHECK(error_code_of([] { parse_expression("x3", 2); }) == ErrorCode::ParseError);
  CHECK(error_code_of([] { parse_expression("x1 +", 2); }) == ErrorCode::ParseError);
  // a vector field is hkr_chi(X) in arity 1
  PolyDiffOp chi = value_as_operator(parse_expression("x2*d1", 2), 2, 1);
  CHECK(dq::apply(chi, {var(2, 0) * var(2, 0)}) == Rational(2) * var(2, 0) * var(2, 1));
}

TEST_CASE("canonical strings round trip") {
  Rng r(17);
  for (int i = 0; i < 40; ++i) {
    Polynomial p = random_polynomial(r, 3, 3);
    CHECK(value_as_polynomial(parse_expression(canonical_string(p), 3), 3) == p);
    PolyDiffOp op = random_polydiff(r, 2, 2, 2, 2);
    CHECK(value_as_operator(parse_expression(canonical_string(op), 2), 2, 2) == op);
    PolyVectorField x = random_polyvector(r, 3, 2, 2);
    CHECK(value_as_polyvector(parse_expression(canonical_string(x), 3), 3) == x);
  }
}

TEST_CASE("basic definitions") {
  SessionFile s = parse_session("dim 2\npoly f = x1\nmvf pi = d1^d2\nop T = x1*(d[1]|d[2])\n");
  CHECK(s.dim == 2);
  REQUIRE(s.definitions.size() == 3);
  CHECK(std::get<Polynomial>(s.require("f", DefinitionKind::Poly).value) == var(2, 0));
  CHECK(std::get<PolyVectorField>(s.require("pi", DefinitionKind::Mvf).value) == symplectic(2));
  CHECK(s.require("T", DefinitionKind::Op).line == 4);
  CHECK(s.find("g") == nullptr);
  CHECK(error_code_of([&] { s.require("g", DefinitionKind::Poly); }) == ErrorCode::ResolveError);
  CHECK(error_code_of([&] { s.require("f", DefinitionKind::Mvf); }) == ErrorCode::ResolveError);
}

TEST_CASE("comments and blank lines") {
  SessionFile s = parse_session("# header\n\ndim 1   # line\n\npoly f = x1^3 # cube\n");
  CHECK(s.dim == 1);
  CHECK(s.definitions.size() == 1);
}

TEST_CASE("parse errors carry a position") {
  Failure f = parse_failure("dim 2\npoly f = x1 +* x2\n");
  CHECK(f.code == ErrorCode::ParseError);
  CHECK(f.line == 2);
  CHECK(f.column > 1);

  f = parse_failure("poly f = x1\n");
  CHECK(f.code == ErrorCode::ParseError);
  CHECK(f.line == 1);
  CHECK(f.column == 1);

  f = parse_failure("dim 2\nwidget w = 1\n");
  CHECK(f.line == 2);
  CHECK(f.token == "widget");

  f = parse_failure("dim 0\n");
  CHECK(f.code == ErrorCode::ParseError);
  CHECK(f.column == 5);

  CHECK(parse_failure("dim 2\ndim 2\n").line == 2);
  CHECK(parse_failure("dim 2\npoly f = x3\n").code == ErrorCode::ParseError);
}

TEST_CASE("reserved and duplicate names") {
  for (const char* n : {"x1", "d2", "e1", "d", "poly", "moyal", "run"}) {
    Failure f = parse_failure(std::string("dim 2\npoly ") + n + " = 1\n");
    CHECK_MESSAGE(f.code == ErrorCode::ParseError, n);
    CHECK(f.line == 2);
  }
  CHECK(parse_failure("dim 2\npoly x = 1\npoly xx = 2\npoly e = 3\n").line == 0);
  Failure f = parse_failure("dim 2\npoly f = 1\nmvf f = d1\n");
  CHECK(f.code == ErrorCode::ParseError);
  CHECK(f.line == 3);
  CHECK(f.token == "f");
}

TEST_CASE("resolution errors") {
  Failure f = parse_failure("dim 2\nstar S = moyal(pi, order=2)\n");
  CHECK(f.code == ErrorCode::ResolveError);
  CHECK(f.line == 2);
  CHECK(f.token == "pi");

  f = parse_failure("dim 2\npoly pi = x1\nstar S = moyal(pi, order=2)\n");
  CHECK(f.code == ErrorCode::ResolveError);

  f = parse_failure("dim 2\naction phi0 = { e1 -> d1 }\n");
  CHECK(f.code == ErrorCode::ResolveError);
}

TEST_CASE("engine errors keep their code") {
  Failure f = parse_failure("dim 2\nmvf pi = x1*(d1^d2)\nstar S = moyal(pi, order=2)\n");
  CHECK(f.code == ErrorCode::NonConstantCoefficients);
  CHECK(f.line == 3);
  f = parse_failure("dim 3\nmvf pi = x3*(d1^d2) + x2*(d2^d3)\nstar S = moyal(pi, order=2)\n");
  CHECK(f.code == ErrorCode::NotPoisson);
  f = parse_failure("dim 2\nlie g = { [e1,e2] = e2 }\naction phi0 = { e1 -> d1, e2 -> x1*d2 }\n");
  CHECK(f.code == ErrorCode::NotHomomorphism);
}

TEST_CASE("star products") {
  SessionFile s = parse_session(
      "dim 2\nmvf pi = d1^d2\nstar S = moyal(pi, order=3)\n"
      "star K = { B1 = 1/2*x2*(d[1]|d[2]) - 1/2*x2*(d[2]|d[1]) }\n"
      "star G = { B2 = 1/8*(d[1,1]|d[2,2]) }\n");
  const auto& S = std::get<StarDefinition>(s.require("S", DefinitionKind::Star).value);
  CHECK(S.star.truncation_order() == 3);
  CHECK(S.moyal_bivector == std::optional<std::string>("pi"));
  CHECK(S.star.b(1) == Rational(1, 2) * hkr_chi(symplectic(2)));
  const auto& K = std::get<StarDefinition>(s.require("K", DefinitionKind::Star).value);
  CHECK(K.star.truncation_order() == 1);
  CHECK_FALSE(K.moyal_bivector.has_value());
  const auto& G = std::get<StarDefinition>(s.require("G", DefinitionKind::Star).value);
  CHECK(G.star.truncation_order() == 2);
  CHECK(G.star.b(1).is_zero());

  CHECK(parse_failure("dim 2\nstar K = { B1 = d[1]|d[2], B1 = 0 }\n").code == ErrorCode::ParseError);
  CHECK(parse_failure("dim 2\nstar K = { C1 = 0 }\n").code == ErrorCode::ParseError);
  CHECK(parse_failure("dim 2\nstar K = { B1 = d1 }\n").code != ErrorCode::UsageError);
}

TEST_CASE("Lie algebras, actions, cochains") {
  SessionFile s = parse_session(
      "dim 2\n"
      "lie g = { [e1,e2] = e2 }\n"
      "lie h(3) = {}\n"
      "action phi0 : g = { e1 -> x1*d1 - x2*d2, e2 -> d2 }\n"
      "cochain mvf c : g = { e1 -> -2*x2*d1, e2 -> d1 }\n"
      "cochain op q : g = { [e1,e2] -> x1*(d[1]|d[2]) }\n"
      "cochain poly z : h = { [e1,e2,e3] -> 1 }\n");
  const auto& g = std::get<LieAlgebra>(s.require("g", DefinitionKind::Lie).value);
  CHECK(g.dim() == 2);
  CHECK(g.c(0, 1, 1) == 1);
  CHECK(g.c(1, 0, 1) == -1);
  const auto& h = std::get<LieAlgebra>(s.require("h", DefinitionKind::Lie).value);
  CHECK(h.dim() == 3);
  CHECK(h.is_abelian());
  const auto& a = std::get<ActionDefinition>(s.require("phi0", DefinitionKind::Action).value);
  CHECK(a.algebra == "g");
  CHECK(a.action.image(1) == PolyVectorField::basis(2, 1));
  const auto& c = std::get<CochainDefinition>(s.require("c", DefinitionKind::Cochain).value);
  CHECK(c.algebra == "g");
  CHECK(c.cochain.degree() == 1);
  CHECK(c.cochain.kind() == CoefficientKind::PolyVector);
  const auto& q = std::get<CochainDefinition>(s.require("q", DefinitionKind::Cochain).value);
  CHECK(q.cochain.kind() == CoefficientKind::PolyDiff);
  CHECK(q.cochain.degree() == 2);
  const auto& z = std::get<CochainDefinition>(s.require("z", DefinitionKind::Cochain).value);
  CHECK(z.algebra == "h");
  CHECK(z.cochain.degree() == 3);

  // the algebra dimension follows the highest generator named
  SessionFile w = parse_session("dim 2\nlie g = { [e1,e2] = e3 }\n");
  CHECK(std::get<LieAlgebra>(w.require("g", DefinitionKind::Lie).value).dim() == 3);
  CHECK(parse_failure("dim 2\nlie g = { [e1,e1] = e2 }\n").code != ErrorCode::UsageError);
  CHECK(parse_failure("dim 2\nlie g = { [e1,e2] = e2, [e1,e2] = e1 }\n").code == ErrorCode::ParseError);
  CHECK(parse_failure("dim 2\nlie g = { [e1,e2] = e2 }\ncochain c = { e1 -> d1, [e1,e2] -> d1 }\n").code !=
        ErrorCode::UsageError);
}

TEST_CASE("series and run directives") {
  SessionFile s = parse_session(
      "dim 2\nseries T = { T1 = 1/2*d[1,2], T3 = d[1] }\n"
      "run gauge S T\nrun verify-mc S --order 4\n");
  const auto& t = std::get<SeriesDefinition>(s.require("T", DefinitionKind::Series).value);
  CHECK(t.prefix == "T");
  CHECK(t.max_order() == 3);
  auto dense = t.dense(2, 1, 3);
  REQUIRE(dense.size() == 3);
  CHECK(dense[1].is_zero());
  CHECK(dense[2] == hkr_chi(PolyVectorField::basis(2, 0)));
  CHECK(s.directives == std::vector<std::string>{"gauge S T", "verify-mc S --order 4"});
  CHECK(parse_failure("dim 2\nseries T = { T1 = d1, U2 = d2 }\n").code == ErrorCode::ParseError);
}

TEST_CASE("serialize round trip") {
  const std::string text =
      "dim 2\n"
      "poly f = 3/2*x1^2*x2 - x2\n"
      "mvf pi = d1^d2\n"
      "op T = x1*(d[1]|d[2]) + 1/3*(d[]|d[1,1])\n"
      "star S = moyal(pi, order=3)\n"
      "star K = { B1 = 1/2*x2*(d[1]|d[2]) - 1/2*x2*(d[2]|d[1]) }\n"
      "lie g = { [e1,e2] = e2 }\n"
      "action phi0 : g = { e1 -> x1*d1 - x2*d2, e2 -> d2 }\n"
      "cochain mvf c : g = { e1 -> -2*x2*d1, e2 -> d1 }\n"
      "series G = { G1 = 1/2*d[1,2] }\n"
      "run verify-mc S --order 3\n";
  SessionFile a = parse_session(text);
  const std::string once = serialize_session(a);
  SessionFile b = parse_session(once);
  CHECK(same_definitions(a, b));
  CHECK(serialize_session(b) == once);
  CHECK(b.directives == a.directives);
  SessionFile c = parse_session("dim 2\npoly f = x1\n");
  CHECK_FALSE(same_definitions(a, c));
}

TEST_CASE("default order from the environment") {
  {
    EnvOrder e(nullptr);
    CHECK(default_order(4) == 4);
  }
  {
    EnvOrder e("6");
    CHECK(default_order(4) == 6);
    SessionFile s = parse_session("dim 2\nmvf pi = d1^d2\nstar S = moyal(pi)\n");
    CHECK(std::get<StarDefinition>(s.require("S", DefinitionKind::Star).value).star.truncation_order() == 6);
  }
  {
    EnvOrder e("");
    CHECK(default_order(3) == 3);
  }
  for (const char* bad : {"-2", "abc", "65", "4x"}) {
    EnvOrder e(bad);
    CHECK_MESSAGE(error_code_of([] { default_order(3); }) == ErrorCode::UsageError, bad);
  }
}

}  // TEST_SUITE
