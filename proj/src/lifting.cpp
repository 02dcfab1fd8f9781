#include "dq/lifting.hpp"

#include "dq/errors.hpp"

namespace dq {

std::string_view to_string(ObstructionKind kind) {
  switch (kind) {
    case ObstructionKind::HochschildRhsNotClosed: return "hochschild_rhs_not_closed";
    case ObstructionKind::PoissonClass: return "poisson_class";
    case ObstructionKind::BicomplexClass: return "bicomplex_class";
    case ObstructionKind::ChevalleyClass: return "chevalley_class";
  }
  return "unknown";
}

bool ObstructionReport::has_nontrivial_class() const {
  for (const auto& c : classes)
    if (c.verdict_attempted && !c.trivial_at_bound) return true;
  return false;
}

namespace {

void require_associative(const StarProduct& star, int order) {
  if (order > star.truncation_order())
    throw Error(ErrorCode::TruncationMismatch, "requested order " + std::to_string(order) + " exceeds the star product truncation " +
                                                   std::to_string(star.truncation_order()));
  // the whole product is checked, not only the orders this computation reads
  for (const auto& r : verify_mc(star, star.truncation_order()))
    if (!r.is_zero) throw Error(ErrorCode::MCDefect, "star product is not associative at order " + std::to_string(r.order));
}

PoissonStructure bivector_of(const StarProduct& star) {
  if (star.dim() < 2) throw Error(ErrorCode::DimensionMismatch, "star product needs dimension >= 2");
  return PoissonStructure(star.poisson_bivector());
}

// Order-n term of [m, X] with m = mu + sum h^k B_k.
PolyDiffOp derivation_defect(const StarProduct& star, const std::vector<PolyDiffOp>& terms, int n) {
  PolyDiffOp out(star.dim(), 2);
  for (int k = 0; k <= n; ++k) {
    if (k > star.truncation_order() || n - k >= static_cast<int>(terms.size())) continue;
    const auto& x = terms[static_cast<std::size_t>(n - k)];
    if (x.is_zero()) continue;
    out += gerstenhaber(star.b(k), x);
  }
  return out;
}

// -sum_{k=1}^{n} [B_k, X_{n-k}]
PolyDiffOp derivation_rhs(const StarProduct& star, const std::vector<PolyDiffOp>& terms, int n) {
  PolyDiffOp out(star.dim(), 2);
  for (int k = 1; k <= n; ++k) {
    const auto& x = terms[static_cast<std::size_t>(n - k)];
    if (x.is_zero()) continue;
    out -= gerstenhaber(star.b(k), x);
  }
  return out;
}

std::string witness_string(const PolyVectorField& x, const PolyVectorField& w) {
  return "[" + x.to_string() + ", pi] = " + w.to_string();
}

ObstructionClass poisson_class(const PoissonStructure& pi, const PolyVectorField& z, int degree_bound) {
  ObstructionClass c;
  c.kind = ObstructionKind::PoissonClass;
  c.polyvector = z;
  c.degree_bound = degree_bound;
  c.representative_closed = lichnerowicz_d(pi, z).is_zero();
  if (!c.representative_closed) return c;
  c.verdict_attempted = true;
  auto verdict = poisson_class_is_trivial(pi, z, degree_bound);
  if (auto* t = std::get_if<PoissonTrivial>(&verdict)) {
    c.trivial_at_bound = true;
    c.primitive = t->primitive.to_string();
  } else {
    c.certificate = std::get<PoissonNontrivialAtBound>(verdict).certificate;
  }
  return c;
}

// t with t * s = z, if one exists.
std::optional<Rational> proportionality(const PolyVectorField& s, const PolyVectorField& z) {
  if (s.is_zero()) return std::nullopt;
  const auto fs = s.flatten();
  const auto fz = z.flatten();
  const Rational t = fz.count(fs.begin()->first) ? fz.at(fs.begin()->first) / fs.begin()->second : Rational(0);
  if (t == 0) return std::nullopt;
  PolyVectorField check = s;
  check *= t;
  if (!(check == z)) return std::nullopt;
  return t;
}

}  // namespace

int derivation_certified_order(const StarProduct& star, const std::vector<PolyDiffOp>& terms) {
  int certified = -1;
  const int top = std::min(star.truncation_order(), static_cast<int>(terms.size()) - 1);
  for (int n = 0; n <= top; ++n) {
    if (!derivation_defect(star, terms, n).is_zero()) break;
    certified = n;
  }
  return certified;
}

LiftFieldResult lift_vector_field(const StarProduct& star, const PolyVectorField& x0, int order, const LiftBounds& bounds) {
  if (x0.dim() != star.dim()) throw Error(ErrorCode::DimensionMismatch, "vector field and star product dimensions differ");
  if (x0.grade() != 1 && !x0.is_zero()) throw Error(ErrorCode::MalformedInput, "x0 must be a vector field");
  require_associative(star, order);
  const PoissonStructure pi = bivector_of(star);
  const PolyVectorField x = x0.grade() == 1 ? x0 : PolyVectorField(star.dim(), 1);
  const PolyVectorField w = poisson_witness(x, pi);
  if (!w.is_zero()) throw Error(ErrorCode::NotPoissonField, witness_string(x, w));

  DerivationSeries series{star, {as_cochain(x)}, -1, {}};
  if (series.terms.front().is_zero()) series.terms.front() = PolyDiffOp(star.dim(), 1);
  auto& terms = series.terms;

  for (int n = 1; n <= order; ++n) {
    PolyDiffOp rhs = derivation_rhs(star, terms, n);
    if (!hochschild_delta(rhs).is_zero())
      throw Error(ErrorCode::RHSNotClosed, "order " + std::to_string(n) + " right-hand side is not a Hochschild cocycle");
    auto prim = cocycle_primitive(rhs, bounds.ansatz);
    if (auto* p = std::get_if<Primitive>(&prim)) {
      terms.push_back(p->psi.is_zero() ? PolyDiffOp(star.dim(), 1) : p->psi);
      continue;
    }
    const PolyVectorField z = skew_symbol(rhs);
    ObstructionClass cls = poisson_class(pi, z, bounds.class_degree);
    if (!cls.representative_closed)
      throw Error(ErrorCode::IntegrityFailure, "order " + std::to_string(n) + " obstruction representative is not d_pi-closed");
    if (!cls.trivial_at_bound) {
      ObstructionReport report{n, bounds.ansatz, {std::move(cls)}, terms};
      return report;
    }
    if (n < 2) throw Error(ErrorCode::AnsatzExhausted, "order 1 class vanishes but no primitive inside the ansatz");

    // The class vanishes: shift X_{n-1} by a vector field so that the projected class cancels.
    auto verdict = poisson_class_is_trivial(pi, z, bounds.class_degree);
    const PolyVectorField& primitive = std::get<PoissonTrivial>(verdict).primitive;
    const PolyVectorField s = skew_symbol(gerstenhaber(star.b(1), as_cochain(primitive)));
    const auto t = proportionality(s, z);
    if (!t) throw Error(ErrorCode::AnsatzExhausted, "order " + std::to_string(n) + ": class vanishes but no primitive inside the ansatz");
    PolyVectorField shift = primitive;
    shift *= *t;
    terms[static_cast<std::size_t>(n - 1)] += as_cochain(shift);
    if (!derivation_defect(star, terms, n - 1).is_zero())
      throw Error(ErrorCode::IntegrityFailure, "perturbation spoiled order " + std::to_string(n - 1));
    series.perturbed_orders.push_back(n - 1);

    rhs = derivation_rhs(star, terms, n);
    if (!hochschild_delta(rhs).is_zero())
      throw Error(ErrorCode::RHSNotClosed, "order " + std::to_string(n) + " right-hand side is not a Hochschild cocycle");
    auto retry = cocycle_primitive(rhs, bounds.ansatz);
    auto* p2 = std::get_if<Primitive>(&retry);
    if (!p2) throw Error(ErrorCode::AnsatzExhausted, "order " + std::to_string(n) + ": no primitive after perturbation");
    terms.push_back(p2->psi.is_zero() ? PolyDiffOp(star.dim(), 1) : p2->psi);
  }
  series.certified_order = derivation_certified_order(star, terms);
  if (series.certified_order < order) throw Error(ErrorCode::IntegrityFailure, "lifted series fails its derivation check");
  return series;
}

ObstructionReport obstruction_first(const StarProduct& star, const PolyVectorField& x0, int class_degree) {
  if (x0.dim() != star.dim()) throw Error(ErrorCode::DimensionMismatch, "vector field and star product dimensions differ");
  require_associative(star, 2);
  const PoissonStructure pi = bivector_of(star);
  const PolyVectorField x = x0.grade() == 1 ? x0 : PolyVectorField(star.dim(), 1);
  const PolyVectorField w = poisson_witness(x, pi);
  if (!w.is_zero()) throw Error(ErrorCode::NotPoissonField, witness_string(x, w));
  const PolyDiffOp c = x.is_zero() ? PolyDiffOp(star.dim(), 2) : gerstenhaber(star.b(2), as_cochain(x));
  if (!hochschild_delta(c).is_zero()) throw Error(ErrorCode::RHSNotClosed, "[B_2, X_0] is not a Hochschild cocycle");
  ObstructionReport report;
  report.order = 2;
  report.classes.push_back(poisson_class(pi, skew_symbol(c), class_degree));
  report.partial_terms = {as_cochain(x)};
  return report;
}

namespace {

PolyDiffOp unary_or_zero(const PolyDiffOp& op, int dim) { return op.is_zero() ? PolyDiffOp(dim, 1) : op; }

// Order-n homomorphism defect sum_{a+b=n} [phi_a(xi), phi_b(eta)] - phi_n([xi, eta]).
PolyDiffOp homomorphism_defect(const ActionSeries& s, int n, int xi, int eta) {
  const int dim = s.star.dim();
  const LieAlgebra& g = s.action.algebra();
  PolyDiffOp out(dim, 1);
  for (int a = 0; a <= n; ++a) {
    const auto& u = s.phi[static_cast<std::size_t>(a)][static_cast<std::size_t>(xi)];
    const auto& v = s.phi[static_cast<std::size_t>(n - a)][static_cast<std::size_t>(eta)];
    if (u.is_zero() || v.is_zero()) continue;
    out += gerstenhaber(u, v);
  }
  for (int k = 0; k < g.dim(); ++k) {
    const Rational& c = g.c(xi, eta, k);
    if (c == 0) continue;
    out -= c * s.phi[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  }
  return out;
}

FlatVector prefixed(const FlatVector& v, const FlatKey& prefix) {
  FlatVector out;
  for (const auto& [k, c] : v) {
    FlatKey key = prefix;
    key.insert(key.end(), k.begin(), k.end());
    out.emplace(std::move(key), c);
  }
  return out;
}

}  // namespace

void ActionSeries::recertify() {
  const int m = action.algebra().dim();
  const int top = std::min(order(), star.truncation_order());
  certified_order_derivation = top;
  for (int i = 0; i < m; ++i) {
    std::vector<PolyDiffOp> terms;
    for (const auto& level : phi) terms.push_back(level[static_cast<std::size_t>(i)]);
    certified_order_derivation = std::min(certified_order_derivation, derivation_certified_order(star, terms));
  }
  certified_order_homomorphism = -1;
  for (int n = 0; n <= order(); ++n) {
    bool ok = true;
    for (int i = 0; i < m && ok; ++i)
      for (int j = i + 1; j < m && ok; ++j)
        if (!homomorphism_defect(*this, n, i, j).is_zero()) ok = false;
    if (!ok) break;
    certified_order_homomorphism = n;
  }
}

LiftActionResult lift_action(const StarProduct& star, const Action& action, int order, const LiftBounds& bounds) {
  const int dim = star.dim();
  if (action.ambient_dim() != dim) throw Error(ErrorCode::DimensionMismatch, "action and star product dimensions differ");
  require_associative(star, order);
  const PoissonStructure pi = bivector_of(star);
  const auto check = action_is_poisson(action, pi);
  if (!check.is_poisson) {
    const auto& [i, w] = check.witnesses.front();
    throw Error(ErrorCode::NotPoissonAction, "phi0(e" + std::to_string(i + 1) + "): " + witness_string(action.image(i), w));
  }
  const LieAlgebra& g = action.algebra();
  const int m = g.dim();

  ActionSeries series{star, action, {}, -1, -1, {}};
  if (!star.has_parity_pattern()) series.warnings.push_back("star product coefficients do not alternate antisymmetric/symmetric");
  std::vector<PolyDiffOp> level0;
  for (int i = 0; i < m; ++i) level0.push_back(unary_or_zero(as_cochain(action.image(i)), dim));
  series.phi.push_back(std::move(level0));

  const auto basis = polydiff_basis(dim, 1, bounds.ansatz);
  for (int n = 1; n <= order; ++n) {
    // Derivation constraints: delta phi_n(e_i) = -sum_{k=1}^{n} [B_k, phi_{n-k}(e_i)].
    std::vector<PolyDiffOp> rhs_d;
    for (int i = 0; i < m; ++i) {
      std::vector<PolyDiffOp> terms;
      for (const auto& level : series.phi) terms.push_back(level[static_cast<std::size_t>(i)]);
      PolyDiffOp r = derivation_rhs(star, terms, n);
      if (!hochschild_delta(r).is_zero())
        throw Error(ErrorCode::RHSNotClosed, "order " + std::to_string(n) + " derivation right-hand side for e" +
                                                 std::to_string(i + 1) + " is not a Hochschild cocycle");
      rhs_d.push_back(std::move(r));
    }
    // Homomorphism constraints: d_g(phi_n)(e_i, e_j) = -sum_{a+b=n, a,b>=1} [phi_a(e_i), phi_b(e_j)].
    CECochain rhs_h(m, std::min(2, m), CoefficientKind::PolyDiff);
    if (m >= 2) {
      series.phi.push_back(std::vector<PolyDiffOp>(static_cast<std::size_t>(m), PolyDiffOp(dim, 1)));
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) rhs_h.add_value(std::vector<int>{i, j}, -homomorphism_defect(series, n, i, j));
      series.phi.pop_back();
      if (!ce_differential(action, rhs_h).is_zero())
        throw Error(ErrorCode::IntegrityFailure, "order " + std::to_string(n) + " homomorphism right-hand side is not Chevalley-closed");
    }

    SystemAssembler assembler;
    for (int i = 0; i < m; ++i)
      for (const auto& t : basis) {
        FlatVector image = prefixed(hochschild_delta(t).flatten(), {0, i});
        if (m >= 2) {
          CECochain c(m, 1, CoefficientKind::PolyDiff);
          c.add_value(std::vector<int>{i}, t);
          accumulate(image, prefixed(ce_differential(action, c).flatten(), {1}));
        }
        assembler.add_unknown("e" + std::to_string(i + 1) + ":" + t.to_string(), std::move(image));
      }
    FlatVector rhs;
    for (int i = 0; i < m; ++i) accumulate(rhs, prefixed(rhs_d[static_cast<std::size_t>(i)].flatten(), {0, i}));
    if (m >= 2) accumulate(rhs, prefixed(rhs_h.flatten(), {1}));
    auto result = linear_solve(assembler.build(rhs), {.want_kernel = false});

    if (auto* sol = std::get_if<Solution>(&result)) {
      std::vector<PolyDiffOp> level(static_cast<std::size_t>(m), PolyDiffOp(dim, 1));
      for (int i = 0; i < m; ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
          const Rational& v = sol->particular[static_cast<std::size_t>(i) * basis.size() + j];
          if (v != 0) level[static_cast<std::size_t>(i)] += v * basis[j];
        }
      series.phi.push_back(std::move(level));
      continue;
    }

    ObstructionReport report;
    report.order = n;
    report.ansatz = bounds.ansatz;
    for (const auto& level : series.phi) report.partial_terms.insert(report.partial_terms.end(), level.begin(), level.end());

    // omega'(xi) = sum_{k=1}^{n} [B_k, phi_{n-k}(xi)] projected to bivectors.
    ObstructionClass bic;
    bic.kind = ObstructionKind::BicomplexClass;
    bic.restricted = true;
    bic.degree_bound = bounds.class_degree;
    CECochain omega1(m, 1, CoefficientKind::PolyVector);
    for (int i = 0; i < m; ++i) omega1.add_value(std::vector<int>{i}, -skew_symbol(rhs_d[static_cast<std::size_t>(i)]));
    bic.cochains = {omega1};
    bic.representative_closed = is_zero(bicomplex_total_d(action, pi, bic.cochains));
    if (bic.representative_closed) {
      bic.verdict_attempted = true;
      auto v = bicomplex_class_is_trivial(action, pi, bic.cochains, bounds.class_degree, true);
      if (std::holds_alternative<BicomplexTrivial>(v)) {
        bic.trivial_at_bound = true;
      } else {
        bic.certificate = std::get<BicomplexNontrivialAtBound>(v).certificate;
      }
    }
    report.classes.push_back(std::move(bic));

    if (m >= 2) {
      ObstructionClass che;
      che.kind = ObstructionKind::ChevalleyClass;
      che.degree_bound = bounds.class_degree;
      CECochain omega2(m, 2, CoefficientKind::PolyVector);
      for (const auto& [t, v] : rhs_h.values()) omega2.add_value(t, skew_symbol(std::get<PolyDiffOp>(v)));
      che.cochains = {omega2};
      che.representative_closed = ce_differential(action, omega2).is_zero();
      if (che.representative_closed) {
        che.verdict_attempted = true;
        auto v = chevalley_class_is_trivial(action, omega2, 1, bounds.class_degree);
        if (std::holds_alternative<ChevalleyTrivial>(v)) {
          che.trivial_at_bound = true;
        } else {
          che.certificate = std::get<ChevalleyNontrivialAtBound>(v).certificate;
        }
      }
      report.classes.push_back(std::move(che));
    }
    return report;
  }
  series.recertify();
  if (series.certified_order_derivation < order || series.certified_order_homomorphism < order)
    throw Error(ErrorCode::IntegrityFailure, "lifted action fails its own certification");
  return series;
}

std::vector<PolyDiffOp> commutator_defect(const ActionSeries& series, int xi, int eta) {
  const int m = series.action.algebra().dim();
  if (xi < 0 || eta < 0 || xi >= m || eta >= m) throw Error(ErrorCode::PositionOutOfRange, "Lie basis index out of range");
  std::vector<PolyDiffOp> out;
  for (int n = 0; n <= series.certified_order_derivation; ++n) out.push_back(homomorphism_defect(series, n, xi, eta));
  return out;
}

InnerDerivationResult inner_derivation_solve(const StarProduct& star, const std::vector<PolyDiffOp>& d, int degree_bound) {
  const int dim = star.dim();
  const int top = static_cast<int>(d.size()) - 1;
  if (top < 0) return InnerResult{FormalFunction(dim, 0)};
  if (top > star.truncation_order()) throw Error(ErrorCode::TruncationMismatch, "derivation series longer than the star product");
  std::vector<PolyDiffOp> terms;
  for (const auto& t : d) {
    if (t.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "derivation and star product dimensions differ");
    if (!t.is_zero() && t.arity() != 1) throw Error(ErrorCode::ArityMismatch, "derivation terms must be unary");
    terms.push_back(unary_or_zero(t, dim));
  }
  const int certified = derivation_certified_order(star, terms);
  if (certified < top) throw Error(ErrorCode::NotADerivation, "fails the derivation rule at order " + std::to_string(certified + 1));

  // f = sum_{a<top} h^a f_a; the h^n term of ad_f is sum_{k>=1} B_k(f_{n-k}, .) - B_k(., f_{n-k}).
  const auto monomials = multi_indices_up_to(dim, degree_bound);
  SystemAssembler assembler;
  std::vector<std::pair<int, MultiIndex>> unknowns;
  for (int a = 0; a < top; ++a)
    for (const auto& e : monomials) {
      const PolyDiffOp f = PolyDiffOp::function(Polynomial::monomial(e));
      FlatVector image;
      for (int k = 1; a + k <= top; ++k) {
        PolyDiffOp l = circ_k(star.b(k), f, 1) - circ_k(star.b(k), f, 2);
        accumulate(image, prefixed(l.flatten(), {a + k}));
      }
      assembler.add_unknown("h" + std::to_string(a) + ":" + monomial_string(e), std::move(image));
      unknowns.emplace_back(a, e);
    }
  FlatVector rhs;
  for (int n = 0; n <= top; ++n) accumulate(rhs, prefixed(terms[static_cast<std::size_t>(n)].flatten(), {n}));
  auto result = linear_solve(assembler.build(rhs), {.want_kernel = false});
  if (auto* sol = std::get_if<Solution>(&result)) {
    FormalFunction f(dim, top);
    for (std::size_t j = 0; j < unknowns.size(); ++j)
      if (sol->particular[j] != 0) f[unknowns[j].first].add_term(unknowns[j].second, sol->particular[j]);
    return InnerResult{std::move(f)};
  }
  return NotInnerAtBound{degree_bound, std::move(std::get<NoSolution>(result).certificate)};
}

}  // namespace dq
