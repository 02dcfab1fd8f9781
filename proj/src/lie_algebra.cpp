#include "dq/lie_algebra.hpp"

#include <sstream>

#include "dq/errors.hpp"

namespace dq {

LieAlgebra::LieAlgebra(int dim, std::vector<std::vector<std::vector<Rational>>> constants)
    : dim_(dim), c_(std::move(constants)) {
  if (dim < 1) throw Error(ErrorCode::InvalidLieAlgebra, "Lie algebra dimension must be positive");
  if (static_cast<int>(c_.size()) != dim) throw Error(ErrorCode::InvalidLieAlgebra, "structure constant table has wrong size");
  for (const auto& row : c_) {
    if (static_cast<int>(row.size()) != dim) throw Error(ErrorCode::InvalidLieAlgebra, "structure constant table has wrong size");
    for (const auto& col : row)
      if (static_cast<int>(col.size()) != dim) throw Error(ErrorCode::InvalidLieAlgebra, "structure constant table has wrong size");
  }
  auto name = [](int i, int j, int k) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")";
  };
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        if (c(i, j, k) != -c(j, i, k))
          throw Error(ErrorCode::InvalidLieAlgebra, "structure constants not antisymmetric at " + name(i, j, k));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int s = 0; s < dim; ++s) {
          Rational sum = 0;
          for (int l = 0; l < dim; ++l)
            sum += c(i, j, l) * c(l, k, s) + c(j, k, l) * c(l, i, s) + c(k, i, l) * c(l, j, s);
          if (sum != 0) throw Error(ErrorCode::InvalidLieAlgebra, "Jacobi identity fails for triple " + name(i, j, k));
        }
}

LieAlgebra LieAlgebra::from_brackets(int dim,
                                     const std::vector<std::pair<std::pair<int, int>, std::vector<Rational>>>& brackets) {
  if (dim < 1) throw Error(ErrorCode::InvalidLieAlgebra, "Lie algebra dimension must be positive");
  std::vector<std::vector<std::vector<Rational>>> c(
      static_cast<std::size_t>(dim),
      std::vector<std::vector<Rational>>(static_cast<std::size_t>(dim), std::vector<Rational>(static_cast<std::size_t>(dim))));
  std::vector<std::vector<bool>> seen(static_cast<std::size_t>(dim), std::vector<bool>(static_cast<std::size_t>(dim)));
  for (const auto& [ij, v] : brackets) {
    auto [i, j] = ij;
    if (i < 0 || j < 0 || i >= dim || j >= dim) throw Error(ErrorCode::InvalidLieAlgebra, "bracket index out of range");
    if (static_cast<int>(v.size()) != dim) throw Error(ErrorCode::InvalidLieAlgebra, "bracket value has wrong length");
    if (i == j) {
      for (const auto& x : v)
        if (x != 0) throw Error(ErrorCode::InvalidLieAlgebra, "[e_i, e_i] must vanish");
      continue;
    }
    if (seen[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
      throw Error(ErrorCode::InvalidLieAlgebra, "bracket [e" + std::to_string(i + 1) + ",e" + std::to_string(j + 1) + "] given twice");
    seen[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = seen[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
    for (int k = 0; k < dim; ++k) {
      c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(k)];
      c[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = -v[static_cast<std::size_t>(k)];
    }
  }
  return LieAlgebra(dim, std::move(c));
}

const Rational& LieAlgebra::c(int i, int j, int k) const {
  return c_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j)).at(static_cast<std::size_t>(k));
}

bool LieAlgebra::is_abelian() const {
  for (const auto& row : c_)
    for (const auto& col : row)
      for (const auto& v : col)
        if (v != 0) return false;
  return true;
}

PoissonStructure kirillov_kostant(const LieAlgebra& g) {
  const int m = g.dim();
  if (m < 2) throw Error(ErrorCode::DimensionMismatch, "Kirillov-Kostant structure needs dimension >= 2");
  PolyVectorField pi(m, 2);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Polynomial coeff(m);
      for (int k = 0; k < m; ++k) coeff += g.c(i, j, k) * Polynomial::variable(m, k);
      pi.add_component({i, j}, coeff);
    }
  return PoissonStructure(std::move(pi));
}

Action::Action(LieAlgebra g, std::vector<PolyVectorField> images) : g_(std::move(g)), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != g_.dim())
    throw Error(ErrorCode::DimensionMismatch, "action needs one image per Lie basis element");
  if (images_.empty()) throw Error(ErrorCode::MalformedInput, "empty action");
  ambient_dim_ = images_.front().dim();
  for (auto& x : images_) {
    if (x.dim() != ambient_dim_) throw Error(ErrorCode::DimensionMismatch, "action images have different dimensions");
    if (x.grade() != 1) {
      if (!x.is_zero()) throw Error(ErrorCode::MalformedInput, "action images must be vector fields");
      x = PolyVectorField(ambient_dim_, 1);
    }
  }
  const int m = g_.dim();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      PolyVectorField expected(ambient_dim_, 1);
      for (int k = 0; k < m; ++k) expected += g_.c(i, j, k) * images_[static_cast<std::size_t>(k)];
      const PolyVectorField got = schouten(images_[static_cast<std::size_t>(i)], images_[static_cast<std::size_t>(j)]);
      if (!(got == expected))
        throw Error(ErrorCode::NotHomomorphism, "[phi0(e" + std::to_string(i + 1) + "), phi0(e" + std::to_string(j + 1) +
                                                    ")] = " + got.to_string() + " but expected " + expected.to_string());
    }
}

std::string_view to_string(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::Polynomial: return "polynomial";
    case CoefficientKind::PolyVector: return "polyvector";
    case CoefficientKind::PolyDiff: return "polydiff";
  }
  return "unknown";
}

bool is_zero_value(const CoefficientValue& v) {
  return std::visit([](const auto& x) { return x.is_zero(); }, v);
}

CoefficientKind kind_of(const CoefficientValue& v) {
  switch (v.index()) {
    case 0: return CoefficientKind::Polynomial;
    case 1: return CoefficientKind::PolyVector;
    default: return CoefficientKind::PolyDiff;
  }
}

namespace {

CoefficientValue scaled(const CoefficientValue& v, const Rational& r) {
  return std::visit([&](auto x) -> CoefficientValue { return x *= r; }, v);
}

// a += b, tolerating a zero operand of a different grade or arity.
void add_into(CoefficientValue& a, const CoefficientValue& b) {
  if (is_zero_value(b)) return;
  if (is_zero_value(a)) {
    a = b;
    return;
  }
  if (a.index() != b.index()) throw Error(ErrorCode::KindMismatch, "cochain values of different kinds");
  std::visit(
      [&](auto& x) {
        using T = std::decay_t<decltype(x)>;
        x += std::get<T>(b);
      },
      a);
}

std::string value_string(const CoefficientValue& v) {
  return std::visit([](const auto& x) { return x.to_string(); }, v);
}

FlatVector value_flatten(const CoefficientValue& v) {
  return std::visit(
      [](const auto& x) -> FlatVector {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          FlatVector out;
          for (const auto& [e, c] : x.terms()) {
            FlatKey key;
            for (int i = 0; i < e.size(); ++i) key.push_back(e[i]);
            out.emplace(std::move(key), c);
          }
          return out;
        } else {
          return x.flatten();
        }
      },
      v);
}

int permutation_sign_sort(std::vector<int>& t) {
  // Bubble sort, tracking the sign; returns 0 on repeated entries.
  int sign = 1;
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = 0; b + 1 < t.size() - a; ++b) {
      if (t[b] == t[b + 1]) return 0;
      if (t[b] > t[b + 1]) {
        std::swap(t[b], t[b + 1]);
        sign = -sign;
      }
    }
  for (std::size_t a = 1; a < t.size(); ++a)
    if (t[a] == t[a - 1]) return 0;
  return sign;
}

}  // namespace

CECochain::CECochain(int algebra_dim, int degree, CoefficientKind kind)
    : algebra_dim_(algebra_dim), degree_(degree), kind_(kind) {
  if (degree < 0 || degree > algebra_dim) throw Error(ErrorCode::MalformedInput, "cochain degree out of range");
}

const CoefficientValue* CECochain::value(IndexMask tuple) const {
  auto it = values_.find(tuple);
  return it == values_.end() ? nullptr : &it->second;
}

std::optional<CoefficientValue> CECochain::evaluate(const std::vector<int>& tuple) const {
  if (static_cast<int>(tuple.size()) != degree_) throw Error(ErrorCode::ArityMismatch, "cochain evaluated on wrong number of arguments");
  std::vector<int> t = tuple;
  const int sign = permutation_sign_sort(t);
  if (sign == 0) return std::nullopt;
  const CoefficientValue* v = value(indices_mask(t));
  if (!v) return std::nullopt;
  return sign == 1 ? *v : scaled(*v, Rational(-1));
}

void CECochain::add_value(IndexMask tuple, const CoefficientValue& v) {
  if (mask_size(tuple) != degree_) throw Error(ErrorCode::MalformedInput, "cochain tuple length differs from degree");
  if (tuple >> algebra_dim_) throw Error(ErrorCode::PositionOutOfRange, "cochain tuple index out of range");
  if (kind_of(v) != kind_) throw Error(ErrorCode::KindMismatch, "cochain value has the wrong coefficient kind");
  if (is_zero_value(v)) return;
  auto it = values_.find(tuple);
  if (it == values_.end()) {
    values_.emplace(tuple, v);
    return;
  }
  add_into(it->second, v);
  if (is_zero_value(it->second)) values_.erase(it);
}

void CECochain::add_value(const std::vector<int>& increasing, const CoefficientValue& v) {
  add_value(indices_mask(increasing), v);
}

bool CECochain::operator==(const CECochain& other) const {
  if (values_.empty() && other.values_.empty()) return true;
  return degree_ == other.degree_ && kind_ == other.kind_ && values_ == other.values_;
}

CECochain& CECochain::operator+=(const CECochain& other) {
  if (other.is_zero()) return *this;
  if (degree_ != other.degree_) throw Error(ErrorCode::ArityMismatch, "cochain degree mismatch");
  for (const auto& [t, v] : other.values_) add_value(t, v);
  return *this;
}

CECochain& CECochain::operator*=(const Rational& r) {
  if (r == 0) {
    values_.clear();
    return *this;
  }
  for (auto& [t, v] : values_) v = scaled(v, r);
  return *this;
}

FlatVector CECochain::flatten() const {
  FlatVector out;
  for (const auto& [t, v] : values_)
    for (auto& [k, c] : value_flatten(v)) {
      FlatKey key{static_cast<int>(t)};
      key.insert(key.end(), k.begin(), k.end());
      out.emplace(std::move(key), c);
    }
  return out;
}

std::string CECochain::to_string() const {
  if (values_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, v] : values_) {
    if (!first) os << "; ";
    first = false;
    os << "(";
    bool f2 = true;
    for (int i : mask_indices(t)) {
      if (!f2) os << ",";
      f2 = false;
      os << "e" << i + 1;
    }
    os << ") -> " << value_string(v);
  }
  return os.str();
}

CECochain operator+(CECochain a, const CECochain& b) { return a += b; }
CECochain operator*(const Rational& r, CECochain a) { return a *= r; }

CoefficientValue act(const PolyVectorField& field, const CoefficientValue& v) {
  return std::visit(
      [&](const auto& x) -> CoefficientValue {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          Polynomial out(x.dim());
          for (const auto& [m, c] : field.components()) out += c * x.derivative(mask_indices(m).front());
          return out;
        } else if constexpr (std::is_same_v<T, PolyVectorField>) {
          return schouten(field, x);
        } else {
          if (x.is_zero()) return x;
          return gerstenhaber(as_cochain(field), x);
        }
      },
      v);
}

CECochain ce_differential(const Action& action, const CECochain& c) {
  const LieAlgebra& g = action.algebra();
  const int m = g.dim();
  if (c.algebra_dim() != m) throw Error(ErrorCode::DimensionMismatch, "cochain and algebra dimensions differ");
  const int p = c.degree();
  if (p + 1 > m) return CECochain(m, m, c.kind());
  CECochain out(m, p + 1, c.kind());
  for (IndexMask t : masks_of_grade(m, p + 1)) {
    const auto idx = mask_indices(t);
    CoefficientValue acc = c.kind() == CoefficientKind::Polynomial ? CoefficientValue(Polynomial(action.ambient_dim()))
                                                                   : CoefficientValue(PolyVectorField(action.ambient_dim(), 0));
    bool any = false;
    auto accumulate_value = [&](const CoefficientValue& v) {
      if (is_zero_value(v)) return;
      add_into(acc, v);
      any = true;
    };
    for (int i = 0; i <= p; ++i) {
      std::vector<int> rest;
      for (int a = 0; a <= p; ++a)
        if (a != i) rest.push_back(idx[static_cast<std::size_t>(a)]);
      auto v = c.evaluate(rest);
      if (!v) continue;
      CoefficientValue w = act(action.image(idx[static_cast<std::size_t>(i)]), *v);
      accumulate_value(i % 2 == 0 ? w : scaled(w, Rational(-1)));
    }
    for (int i = 0; i <= p; ++i)
      for (int j = i + 1; j <= p; ++j) {
        std::vector<int> rest;
        for (int a = 0; a <= p; ++a)
          if (a != i && a != j) rest.push_back(idx[static_cast<std::size_t>(a)]);
        const int sign = (i + j) % 2 == 0 ? 1 : -1;
        for (int k = 0; k < m; ++k) {
          const Rational& ck = g.c(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)], k);
          if (ck == 0) continue;
          std::vector<int> args{k};
          args.insert(args.end(), rest.begin(), rest.end());
          auto v = c.evaluate(args);
          if (!v) continue;
          accumulate_value(scaled(*v, ck * sign));
        }
      }
    if (any && !is_zero_value(acc)) out.add_value(t, acc);
  }
  return out;
}

PolyVectorField poisson_witness(const PolyVectorField& x, const PoissonStructure& pi) { return schouten(x, pi.bivector()); }

PoissonActionCheck action_is_poisson(const Action& action, const PoissonStructure& pi) {
  if (action.ambient_dim() != pi.dim()) throw Error(ErrorCode::DimensionMismatch, "action and Poisson structure dimensions differ");
  PoissonActionCheck out;
  for (int i = 0; i < action.algebra().dim(); ++i) {
    PolyVectorField w = poisson_witness(action.image(i), pi);
    if (!w.is_zero()) {
      out.is_poisson = false;
      out.witnesses.emplace_back(i, std::move(w));
    }
  }
  return out;
}

namespace {

int value_grade(const CECochain& c) {
  for (const auto& [t, v] : c.values()) return std::get<PolyVectorField>(v).grade();
  return -1;
}

CECochain apply_d_pi(const PoissonStructure& pi, const CECochain& c) {
  CECochain out(c.algebra_dim(), c.degree(), CoefficientKind::PolyVector);
  for (const auto& [t, v] : c.values()) out.add_value(t, schouten(pi.bivector(), std::get<PolyVectorField>(v)));
  return out;
}

using Bidegree = std::pair<int, int>;

void add_component(std::map<Bidegree, CECochain>& into, const CECochain& c) {
  if (c.is_zero()) return;
  const Bidegree key{c.degree(), value_grade(c)};
  auto it = into.find(key);
  if (it == into.end()) {
    into.emplace(key, c);
  } else {
    it->second += c;
  }
}

BicomplexElement regroup(const std::map<Bidegree, CECochain>& parts) {
  BicomplexElement out;
  for (const auto& [k, c] : parts)
    if (!c.is_zero()) out.push_back(c);
  return out;
}

FlatVector flatten_element(const BicomplexElement& e) {
  FlatVector out;
  for (const auto& c : e) {
    if (c.is_zero()) continue;
    const int p = c.degree();
    const int q = value_grade(c);
    FlatVector part;
    for (auto& [k, v] : c.flatten()) {
      FlatKey key{p, q};
      key.insert(key.end(), k.begin(), k.end());
      part.emplace(std::move(key), v);
    }
    accumulate(out, part);
  }
  return out;
}

}  // namespace

BicomplexElement bicomplex_total_d(const Action& action, const PoissonStructure& pi, const BicomplexElement& c) {
  std::map<Bidegree, CECochain> parts;
  for (const auto& comp : c) {
    if (comp.is_zero()) continue;
    if (comp.kind() != CoefficientKind::PolyVector) throw Error(ErrorCode::KindMismatch, "bicomplex components must be polyvector-valued");
    add_component(parts, ce_differential(action, comp));
    CECochain dp = apply_d_pi(pi, comp);
    if (comp.degree() % 2 != 0) dp *= Rational(-1);
    add_component(parts, dp);
  }
  return regroup(parts);
}

bool is_zero(const BicomplexElement& e) {
  for (const auto& c : e)
    if (!c.is_zero()) return false;
  return true;
}

BicomplexVerdict bicomplex_class_is_trivial(const Action& action, const PoissonStructure& pi,
                                            const BicomplexElement& element, int degree_bound, bool restricted) {
  if (!is_zero(bicomplex_total_d(action, pi, element))) throw Error(ErrorCode::NotClosed, "element is not closed under the total differential");
  if (is_zero(element)) return BicomplexTrivial{{}, degree_bound, restricted};
  int total = -1;
  for (const auto& c : element) {
    if (c.is_zero()) continue;
    const int t = c.degree() + value_grade(c);
    if (total >= 0 && t != total) throw Error(ErrorCode::MalformedInput, "bicomplex element mixes total degrees");
    total = t;
  }
  const int m = action.algebra().dim();
  const int n = action.ambient_dim();
  struct Unknown {
    int p;
    IndexMask tuple;
    PolyVectorField value;
  };
  std::vector<Unknown> unknowns;
  SystemAssembler assembler;
  for (int p = 0; p <= total - 1; ++p) {
    const int q = total - 1 - p;
    if (p > m || q > n) continue;
    if (restricted && (p < 1 || q < 1)) continue;
    for (IndexMask t : masks_of_grade(m, p))
      for (auto& w : polyvector_basis(n, q, degree_bound)) {
        CECochain c(m, p, CoefficientKind::PolyVector);
        c.add_value(t, w);
        assembler.add_unknown("p" + std::to_string(p) + ":" + std::to_string(t) + ":" + w.to_string(),
                              flatten_element(bicomplex_total_d(action, pi, {c})));
        unknowns.push_back({p, t, std::move(w)});
      }
  }
  auto result = linear_solve(assembler.build(flatten_element(element)), {.want_kernel = false});
  if (auto* sol = std::get_if<Solution>(&result)) {
    std::map<Bidegree, CECochain> parts;
    for (std::size_t j = 0; j < unknowns.size(); ++j) {
      if (sol->particular[j] == 0) continue;
      CECochain c(m, unknowns[j].p, CoefficientKind::PolyVector);
      c.add_value(unknowns[j].tuple, sol->particular[j] * unknowns[j].value);
      add_component(parts, c);
    }
    return BicomplexTrivial{regroup(parts), degree_bound, restricted};
  }
  return BicomplexNontrivialAtBound{std::move(std::get<NoSolution>(result).certificate), degree_bound, restricted};
}

ChevalleyVerdict chevalley_class_is_trivial(const Action& action, const CECochain& element, int value_grade_q,
                                            int degree_bound) {
  if (element.kind() != CoefficientKind::PolyVector) throw Error(ErrorCode::KindMismatch, "Chevalley check needs polyvector values");
  if (!ce_differential(action, element).is_zero()) throw Error(ErrorCode::NotClosed, "element is not Chevalley-closed");
  const int m = action.algebra().dim();
  const int p = element.degree();
  if (element.is_zero()) return ChevalleyTrivial{CECochain(m, std::max(p - 1, 0), CoefficientKind::PolyVector), degree_bound};
  if (p == 0) return ChevalleyNontrivialAtBound{{}, degree_bound};
  std::vector<std::pair<IndexMask, PolyVectorField>> unknowns;
  SystemAssembler assembler;
  for (IndexMask t : masks_of_grade(m, p - 1))
    for (auto& w : polyvector_basis(action.ambient_dim(), value_grade_q, degree_bound)) {
      CECochain c(m, p - 1, CoefficientKind::PolyVector);
      c.add_value(t, w);
      assembler.add_unknown(std::to_string(t) + ":" + w.to_string(), ce_differential(action, c).flatten());
      unknowns.emplace_back(t, std::move(w));
    }
  auto result = linear_solve(assembler.build(element.flatten()), {.want_kernel = false});
  if (auto* sol = std::get_if<Solution>(&result)) {
    CECochain c(m, p - 1, CoefficientKind::PolyVector);
    for (std::size_t j = 0; j < unknowns.size(); ++j)
      if (sol->particular[j] != 0) c.add_value(unknowns[j].first, sol->particular[j] * unknowns[j].second);
    return ChevalleyTrivial{std::move(c), degree_bound};
  }
  return ChevalleyNontrivialAtBound{std::move(std::get<NoSolution>(result).certificate), degree_bound};
}

}  // namespace dq
