#include "dq/polynomial.hpp"

#include <sstream>

#include "dq/errors.hpp"

namespace dq {

Rational make_rational(long numerator, long denominator) {
  Rational r(numerator, denominator);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

MultiIndex::MultiIndex(int dim) {
  if (dim < 0 || dim > kMaxDim) {
    throw Error(ErrorCode::DimensionMismatch,
                "ambient dimension " + std::to_string(dim) + " outside 0.." + std::to_string(kMaxDim));
  }
  dim_ = static_cast<std::uint8_t>(dim);
}

MultiIndex::MultiIndex(std::initializer_list<int> exponents) : MultiIndex(static_cast<int>(exponents.size())) {
  int i = 0;
  for (int v : exponents) set(i++, v);
}

MultiIndex MultiIndex::unit(int dim, int axis) {
  MultiIndex m(dim);
  m.set(axis, 1);
  return m;
}

void MultiIndex::set(int i, int value) {
  if (i < 0 || i >= dim_) throw Error(ErrorCode::PositionOutOfRange, "multi-index position out of range");
  if (value < 0 || value > 255) throw Error(ErrorCode::MalformedInput, "exponent out of range");
  e_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value);
}

int MultiIndex::order() const noexcept {
  int s = 0;
  for (int i = 0; i < dim_; ++i) s += e_[static_cast<std::size_t>(i)];
  return s;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (dim_ != other.dim_) throw Error(ErrorCode::DimensionMismatch, "multi-index dimension mismatch");
  MultiIndex r(dim_);
  for (int i = 0; i < dim_; ++i) r.set(i, (*this)[i] + other[i]);
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  if (dim_ != other.dim_) throw Error(ErrorCode::DimensionMismatch, "multi-index dimension mismatch");
  MultiIndex r(dim_);
  for (int i = 0; i < dim_; ++i) r.set(i, (*this)[i] - other[i]);
  return r;
}

bool MultiIndex::divides(const MultiIndex& other) const noexcept {
  if (dim_ != other.dim_) return false;
  for (int i = 0; i < dim_; ++i)
    if ((*this)[i] > other[i]) return false;
  return true;
}

namespace {

Rational binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

void enumerate_up_to(int dim, int axis, int remaining, MultiIndex& current, std::vector<MultiIndex>& out) {
  if (axis == dim) {
    out.push_back(current);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    current.set(axis, v);
    enumerate_up_to(dim, axis + 1, remaining - v, current, out);
  }
  current.set(axis, 0);
}

}  // namespace

Rational multi_binomial(const MultiIndex& a, const MultiIndex& b) {
  Rational r = 1;
  for (int i = 0; i < a.size(); ++i) r *= binomial(a[i], b[i]);
  return r;
}

std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order) {
  std::vector<MultiIndex> out;
  if (max_order < 0) return out;
  MultiIndex current(dim);
  enumerate_up_to(dim, 0, max_order, current, out);
  return out;
}

void for_each_split(const MultiIndex& a, int parts,
                    const std::function<void(const std::vector<MultiIndex>&, const Rational&)>& fn) {
  const int dim = a.size();
  std::vector<MultiIndex> pieces(static_cast<std::size_t>(parts), MultiIndex(dim));
  if (parts == 0) {
    if (a.order() == 0) fn(pieces, Rational(1));
    return;
  }
  // Axis by axis, distribute a[axis] over the parts; weight is the product of binomials.
  std::function<void(int, const Rational&)> next_axis;
  std::function<void(int, int, int, const Rational&)> distribute = [&](int axis, int part, int remaining,
                                                                       const Rational& weight) {
    if (part == parts - 1) {
      pieces[static_cast<std::size_t>(part)].set(axis, remaining);
      next_axis(axis + 1, weight);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      pieces[static_cast<std::size_t>(part)].set(axis, v);
      distribute(axis, part + 1, remaining - v, weight * binomial(remaining, v));
    }
  };
  next_axis = [&](int axis, const Rational& weight) {
    if (axis == dim) {
      fn(pieces, weight);
      return;
    }
    distribute(axis, 0, a[axis], weight);
  };
  next_axis(0, Rational(1));
}

Polynomial::Polynomial(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorCode::DimensionMismatch, "ambient dimension must lie in 1.." + std::to_string(kMaxDim));
  }
}

Polynomial Polynomial::constant(int dim, const Rational& c) {
  Polynomial p(dim);
  p.add_term(MultiIndex(dim), c);
  return p;
}

Polynomial Polynomial::variable(int dim, int axis) {
  Polynomial p(dim);
  p.add_term(MultiIndex::unit(dim, axis), 1);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& exponents, const Rational& c) {
  Polynomial p(exponents.size());
  p.add_term(exponents, c);
  return p;
}

int Polynomial::degree() const noexcept {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.order());
  return d;
}

Rational Polynomial::coefficient(const MultiIndex& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const MultiIndex& exponents, const Rational& c) {
  if (exponents.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "monomial dimension mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponents, c);
  if (inserted) {
    // mpq_class(n, d) is not reduced on construction
    it->second.canonicalize();
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::check_dim(const Polynomial& other) const {
  if (dim_ != other.dim_) {
    throw Error(ErrorCode::DimensionMismatch, "polynomial dimension mismatch: " + std::to_string(dim_) +
                                                  " vs " + std::to_string(other.dim_));
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_dim(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_dim(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& r) {
  if (r == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= r;
  return *this;
}

Polynomial Polynomial::derivative(int axis) const {
  if (axis < 0 || axis >= dim_) throw Error(ErrorCode::PositionOutOfRange, "derivative axis out of range");
  Polynomial out(dim_);
  for (const auto& [e, c] : terms_) {
    if (e[axis] == 0) continue;
    MultiIndex lowered = e;
    lowered.set(axis, e[axis] - 1);
    out.add_term(lowered, c * e[axis]);
  }
  return out;
}

Polynomial Polynomial::derivative(const MultiIndex& orders) const {
  if (orders.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "derivative multi-index dimension mismatch");
  Polynomial out(dim_);
  if (orders.order() == 0) return *this;
  for (const auto& [e, c] : terms_) {
    if (!orders.divides(e)) continue;
    Rational factor = c;
    for (int i = 0; i < dim_; ++i) {
      for (int k = 0; k < orders[i]; ++k) factor *= (e[i] - k);
    }
    out.add_term(e - orders, factor);
  }
  return out;
}

bool Polynomial::operator==(const Polynomial& other) const {
  return dim_ == other.dim_ && terms_ == other.terms_;
}

std::string monomial_string(const MultiIndex& exponents, const char* variable) {
  std::string out;
  for (int i = 0; i < exponents.size(); ++i) {
    if (exponents[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += variable + std::to_string(i + 1);
    if (exponents[i] > 1) out += "^" + std::to_string(exponents[i]);
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest monomials first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    const std::string mono = monomial_string(e);
    if (mono.empty()) {
      os << mag.get_str();
    } else if (mag == 1) {
      os << mono;
    } else {
      os << mag.get_str() << "*" << mono;
    }
  }
  return os.str();
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
Polynomial operator-(Polynomial a) { return a *= Rational(-1); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "polynomial dimension mismatch");
  Polynomial out(a.dim());
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) out.add_term(ea + eb, ca * cb);
  return out;
}

Polynomial operator*(Polynomial a, const Rational& r) { return a *= r; }
Polynomial operator*(const Rational& r, Polynomial a) { return a *= r; }

Polynomial partial_derivative(const Polynomial& p, int axis) { return p.derivative(axis); }

std::vector<Polynomial> monomial_basis(int dim, int degree) {
  std::vector<Polynomial> out;
  for (const auto& e : multi_indices_up_to(dim, degree)) out.push_back(Polynomial::monomial(e));
  return out;
}

}  // namespace dq
