#include "dq/hochschild.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "dq/errors.hpp"

namespace dq {

PolyDiffOp::PolyDiffOp(int dim, int arity) : dim_(dim), arity_(arity) {
  if (dim < 1 || dim > kMaxDim) throw Error(ErrorCode::DimensionMismatch, "ambient dimension out of range");
  if (arity < 0) throw Error(ErrorCode::ArityMismatch, "negative arity");
}

PolyDiffOp PolyDiffOp::function(const Polynomial& f) {
  PolyDiffOp out(f.dim(), 0);
  out.add_term({}, f);
  return out;
}

PolyDiffOp PolyDiffOp::multiplication(int dim) {
  PolyDiffOp out(dim, 2);
  out.add_term({MultiIndex(dim), MultiIndex(dim)}, Polynomial::constant(dim, 1));
  return out;
}

PolyDiffOp PolyDiffOp::identity(int dim) {
  PolyDiffOp out(dim, 1);
  out.add_term({MultiIndex(dim)}, Polynomial::constant(dim, 1));
  return out;
}

PolyDiffOp PolyDiffOp::term(const Slots& slots, const Polynomial& coeff) {
  PolyDiffOp out(coeff.dim(), static_cast<int>(slots.size()));
  out.add_term(slots, coeff);
  return out;
}

void PolyDiffOp::add_term(const Slots& slots, const Polynomial& coeff) {
  if (static_cast<int>(slots.size()) != arity_) throw Error(ErrorCode::ArityMismatch, "slot count differs from arity");
  if (coeff.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "coefficient dimension mismatch");
  for (const auto& s : slots)
    if (s.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "slot multi-index dimension mismatch");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(slots, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int PolyDiffOp::max_order() const noexcept {
  if (terms_.empty()) return -1;
  int r = 0;
  for (const auto& [slots, c] : terms_)
    for (const auto& s : slots) r = std::max(r, s.order());
  return r;
}

int PolyDiffOp::coefficient_degree() const noexcept {
  int d = -1;
  for (const auto& [slots, c] : terms_) d = std::max(d, c.degree());
  return d;
}

void PolyDiffOp::check_compatible(const PolyDiffOp& other) const {
  if (dim_ != other.dim_) throw Error(ErrorCode::DimensionMismatch, "operator dimension mismatch");
  if (arity_ != other.arity_)
    throw Error(ErrorCode::ArityMismatch,
                "operator arity mismatch: " + std::to_string(arity_) + " vs " + std::to_string(other.arity_));
}

PolyDiffOp& PolyDiffOp::operator+=(const PolyDiffOp& other) {
  if (other.is_zero() && other.dim_ == dim_) return *this;
  if (is_zero() && other.dim_ == dim_) arity_ = other.arity_;
  check_compatible(other);
  for (const auto& [s, c] : other.terms_) add_term(s, c);
  return *this;
}

PolyDiffOp& PolyDiffOp::operator-=(const PolyDiffOp& other) {
  if (other.is_zero() && other.dim_ == dim_) return *this;
  if (is_zero() && other.dim_ == dim_) arity_ = other.arity_;
  check_compatible(other);
  for (const auto& [s, c] : other.terms_) add_term(s, -c);
  return *this;
}

PolyDiffOp& PolyDiffOp::operator*=(const Rational& r) {
  if (r == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [s, c] : terms_) c *= r;
  return *this;
}

bool PolyDiffOp::operator==(const PolyDiffOp& other) const {
  if (dim_ != other.dim_) return false;
  if (terms_.empty() && other.terms_.empty()) return true;
  return arity_ == other.arity_ && terms_ == other.terms_;
}

PolyDiffOp PolyDiffOp::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != arity_) throw Error(ErrorCode::ArityMismatch, "permutation length differs from arity");
  // result(f_1..f_p) = this(f_{perm[0]}, ...): slot j of this acts on argument perm[j].
  PolyDiffOp out(dim_, arity_);
  for (const auto& [slots, c] : terms_) {
    Slots moved(slots.size(), MultiIndex(dim_));
    for (int j = 0; j < arity_; ++j) moved[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = slots[static_cast<std::size_t>(j)];
    out.add_term(moved, c);
  }
  return out;
}

FlatVector PolyDiffOp::flatten() const {
  FlatVector out;
  for (const auto& [slots, coeff] : terms_)
    for (const auto& [e, c] : coeff.terms()) {
      FlatKey key;
      key.reserve(static_cast<std::size_t>((arity_ + 1) * dim_));
      for (const auto& s : slots)
        for (int i = 0; i < dim_; ++i) key.push_back(s[i]);
      for (int i = 0; i < dim_; ++i) key.push_back(e[i]);
      out.emplace(std::move(key), c);
    }
  return out;
}

namespace {

std::string slot_string(const MultiIndex& s) {
  if (s.order() == 0) return "1";
  std::string out = "d[";
  bool first = true;
  for (int i = 0; i < s.size(); ++i)
    for (int k = 0; k < s[i]; ++k) {
      if (!first) out += ",";
      first = false;
      out += std::to_string(i + 1);
    }
  return out + "]";
}

}  // namespace

std::string PolyDiffOp::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [slots, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    if (slots.empty()) continue;
    os << "*(";
    for (std::size_t j = 0; j < slots.size(); ++j) {
      if (j) os << "|";
      os << slot_string(slots[j]);
    }
    os << ")";
  }
  return os.str();
}

PolyDiffOp operator+(PolyDiffOp a, const PolyDiffOp& b) { return a += b; }
PolyDiffOp operator-(PolyDiffOp a, const PolyDiffOp& b) { return a -= b; }
PolyDiffOp operator-(PolyDiffOp a) { return a *= Rational(-1); }
PolyDiffOp operator*(const Rational& r, PolyDiffOp a) { return a *= r; }

Polynomial apply(const PolyDiffOp& op, const std::vector<Polynomial>& args) {
  if (static_cast<int>(args.size()) != op.arity())
    throw Error(ErrorCode::ArityMismatch, "argument count differs from operator arity");
  for (const auto& a : args)
    if (a.dim() != op.dim()) throw Error(ErrorCode::DimensionMismatch, "argument dimension mismatch");
  Polynomial out(op.dim());
  for (const auto& [slots, c] : op.terms()) {
    Polynomial prod = c;
    for (std::size_t j = 0; j < slots.size() && !prod.is_zero(); ++j) prod *= args[j].derivative(slots[j]);
    out += prod;
  }
  return out;
}

PolyDiffOp hochschild_delta(const PolyDiffOp& phi) {
  const int dim = phi.dim();
  const int p = phi.arity();
  PolyDiffOp out(dim, p + 1);
  const MultiIndex zero(dim);
  for (const auto& [slots, c] : phi.terms()) {
    PolyDiffOp::Slots s;
    s.push_back(zero);
    s.insert(s.end(), slots.begin(), slots.end());
    out.add_term(s, c);

    for (int i = 1; i <= p; ++i) {
      const Rational sign = i % 2 == 0 ? 1 : -1;
      for_each_split(slots[static_cast<std::size_t>(i - 1)], 2, [&](const std::vector<MultiIndex>& parts, const Rational& w) {
        PolyDiffOp::Slots t;
        t.insert(t.end(), slots.begin(), slots.begin() + (i - 1));
        t.push_back(parts[0]);
        t.push_back(parts[1]);
        t.insert(t.end(), slots.begin() + i, slots.end());
        out.add_term(t, c * (sign * w));
      });
    }

    PolyDiffOp::Slots last(slots.begin(), slots.end());
    last.push_back(zero);
    out.add_term(last, c * Rational((p + 1) % 2 == 0 ? 1 : -1));
  }
  return out;
}

PolyDiffOp cup(const PolyDiffOp& phi, const PolyDiffOp& psi) {
  if (phi.dim() != psi.dim()) throw Error(ErrorCode::DimensionMismatch, "operator dimension mismatch");
  PolyDiffOp out(phi.dim(), phi.arity() + psi.arity());
  for (const auto& [sa, ca] : phi.terms())
    for (const auto& [sb, cb] : psi.terms()) {
      PolyDiffOp::Slots s = sa;
      s.insert(s.end(), sb.begin(), sb.end());
      out.add_term(s, ca * cb);
    }
  return out;
}

PolyDiffOp circ_k(const PolyDiffOp& phi, const PolyDiffOp& psi, int k) {
  if (phi.dim() != psi.dim()) throw Error(ErrorCode::DimensionMismatch, "operator dimension mismatch");
  const int p = phi.arity();
  const int q = psi.arity();
  if (k < 1 || k > p) throw Error(ErrorCode::PositionOutOfRange, "composition position out of range");
  PolyDiffOp out(phi.dim(), p + q - 1);
  for (const auto& [sa, ca] : phi.terms()) {
    const MultiIndex& outer = sa[static_cast<std::size_t>(k - 1)];
    for (const auto& [sb, cb] : psi.terms()) {
      // The outer derivative distributes over the inner coefficient and the q inner slots.
      for_each_split(outer, q + 1, [&](const std::vector<MultiIndex>& parts, const Rational& w) {
        Polynomial coeff = cb.derivative(parts[0]);
        if (coeff.is_zero()) return;
        PolyDiffOp::Slots s(sa.begin(), sa.begin() + (k - 1));
        for (int j = 0; j < q; ++j) s.push_back(sb[static_cast<std::size_t>(j)] + parts[static_cast<std::size_t>(j + 1)]);
        s.insert(s.end(), sa.begin() + k, sa.end());
        out.add_term(s, ca * coeff * w);
      });
    }
  }
  return out;
}

PolyDiffOp gerstenhaber_composition(const PolyDiffOp& phi, const PolyDiffOp& psi) {
  if (phi.dim() != psi.dim()) throw Error(ErrorCode::DimensionMismatch, "operator dimension mismatch");
  const int p = phi.arity();
  const int q = psi.arity();
  PolyDiffOp out(phi.dim(), std::max(p + q - 1, 0));
  for (int k = 1; k <= p; ++k) {
    PolyDiffOp t = circ_k(phi, psi, k);
    if (((k - 1) * (q - 1)) % 2 != 0) t *= Rational(-1);
    out += t;
  }
  return out;
}

PolyDiffOp gerstenhaber(const PolyDiffOp& phi, const PolyDiffOp& psi) {
  if (phi.dim() != psi.dim()) throw Error(ErrorCode::DimensionMismatch, "operator dimension mismatch");
  const int p = phi.arity();
  const int q = psi.arity();
  if (p + q == 0) return PolyDiffOp(phi.dim(), 0);
  PolyDiffOp out = gerstenhaber_composition(phi, psi);
  PolyDiffOp back = gerstenhaber_composition(psi, phi);
  if (((p - 1) * (q - 1)) % 2 == 0) {
    out -= back;
  } else {
    out += back;
  }
  return out;
}

namespace {

int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t a = 0; a < perm.size(); ++a)
    for (std::size_t b = a + 1; b < perm.size(); ++b)
      if (perm[a] > perm[b]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

Rational factorial(int n) {
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

PolyDiffOp hkr_chi(const PolyVectorField& phi) {
  const int dim = phi.dim();
  const int p = phi.grade();
  PolyDiffOp out(dim, p);
  for (const auto& [m, coeff] : phi.components()) {
    const auto idx = mask_indices(m);
    std::vector<int> perm(idx.size());
    std::iota(perm.begin(), perm.end(), 0);
    // (1/p!) sum over sigma of sign * Phi(df_sigma(1), ...); Phi is already alternating, so each
    // permutation of the arguments contributes the same determinant and the prefactor cancels.
    do {
      PolyDiffOp::Slots s;
      for (int a : perm) s.push_back(MultiIndex::unit(dim, idx[static_cast<std::size_t>(a)]));
      out.add_term(s, coeff * Rational(permutation_sign(perm)));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

PolyVectorField skew_symbol(const PolyDiffOp& phi) {
  const int dim = phi.dim();
  const int p = phi.arity();
  if (p > dim) return PolyVectorField(dim, 0);
  PolyVectorField out(dim, p);
  const Rational scale = 1 / factorial(p);
  for (const auto& [slots, c] : phi.terms()) {
    std::vector<int> axes;
    bool first_order = true;
    for (const auto& s : slots) {
      if (s.order() != 1) {
        first_order = false;
        break;
      }
      for (int i = 0; i < dim; ++i)
        if (s[i] == 1) axes.push_back(i);
    }
    if (!first_order) continue;
    std::vector<int> sorted = axes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    // Sign of the permutation taking sorted order to slot order.
    std::vector<int> ranks;
    for (int a : axes) ranks.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), a) - sorted.begin()));
    out.add_component(indices_mask(sorted), c * (scale * permutation_sign(ranks)));
  }
  return out;
}

std::vector<PolyDiffOp> polydiff_basis(int dim, int arity, const AnsatzBounds& bounds) {
  std::vector<PolyDiffOp> out;
  const auto slot_choices = multi_indices_up_to(dim, bounds.max_order);
  const auto monomials = multi_indices_up_to(dim, bounds.max_degree);
  std::vector<std::size_t> pick(static_cast<std::size_t>(arity), 0);
  while (true) {
    PolyDiffOp::Slots slots;
    for (std::size_t j : pick) slots.push_back(slot_choices[j]);
    for (const auto& e : monomials) out.push_back(PolyDiffOp::term(slots, Polynomial::monomial(e)));
    // Odometer over the slot choices.
    int pos = arity - 1;
    while (pos >= 0 && ++pick[static_cast<std::size_t>(pos)] == slot_choices.size()) pick[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
  }
  return out;
}

AnsatzBounds default_primitive_bounds(const PolyDiffOp& phi) {
  return {2 + std::max(phi.max_order(), 0), 1 + std::max(phi.coefficient_degree(), 0)};
}

namespace {

std::string basis_label(const PolyDiffOp& t) { return t.to_string(); }

}  // namespace

PrimitiveResult cocycle_primitive(const PolyDiffOp& phi, const AnsatzBounds& bounds) {
  if (!hochschild_delta(phi).is_zero()) throw Error(ErrorCode::NotClosed, "delta(phi) != 0");
  const int dim = phi.dim();
  const int p = phi.arity();
  if (phi.is_zero()) return Primitive{PolyDiffOp(dim, std::max(p - 1, 0))};
  if (p == 0) return NoneAtBound{bounds, {}};

  const auto basis = polydiff_basis(dim, p - 1, bounds);
  SystemAssembler assembler;
  for (const auto& t : basis) assembler.add_unknown(basis_label(t), hochschild_delta(t).flatten());
  auto result = linear_solve(assembler.build(phi.flatten()), {.want_kernel = false});
  if (auto* sol = std::get_if<Solution>(&result)) {
    PolyDiffOp psi(dim, p - 1);
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (sol->particular[j] != 0) psi += sol->particular[j] * basis[j];
    return Primitive{std::move(psi)};
  }
  return NoneAtBound{bounds, std::move(std::get<NoSolution>(result).certificate)};
}

HochschildDegreeReport hochschild_report(const PolyDiffOp& phi) {
  HochschildDegreeReport r{phi, hochschild_delta(phi), false};
  r.is_cocycle = r.differential.is_zero();
  return r;
}

}  // namespace dq
