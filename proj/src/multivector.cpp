#include "dq/multivector.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "dq/errors.hpp"

namespace dq {

int mask_size(IndexMask m) noexcept { return std::popcount(m); }

std::vector<int> mask_indices(IndexMask m) {
  std::vector<int> out;
  for (int i = 0; m != 0; ++i, m >>= 1)
    if (m & 1U) out.push_back(i);
  return out;
}

IndexMask indices_mask(const std::vector<int>& indices) {
  IndexMask m = 0;
  int last = -1;
  for (int i : indices) {
    if (i <= last) throw Error(ErrorCode::MalformedInput, "index tuple must be strictly increasing");
    if (i >= 32) throw Error(ErrorCode::PositionOutOfRange, "index out of range");
    m |= IndexMask{1} << i;
    last = i;
  }
  return m;
}

int wedge_sign(IndexMask a, IndexMask b) noexcept {
  if (a & b) return 0;
  // Count pairs (i in a, j in b) with i > j.
  int inversions = 0;
  for (int j = 0; j < 32; ++j) {
    if (!(b >> j & 1U)) continue;
    inversions += std::popcount(a >> (j + 1));
  }
  return inversions % 2 == 0 ? 1 : -1;
}

std::vector<IndexMask> masks_of_grade(int dim, int grade) {
  std::vector<IndexMask> out;
  if (grade < 0 || grade > dim) return out;
  for (IndexMask m = 0; m < (IndexMask{1} << dim); ++m)
    if (mask_size(m) == grade) out.push_back(m);
  return out;
}

namespace {

// Sign of removing xi_i from the right end of xi_m: number of elements of m above i.
int right_derivative_sign(IndexMask m, int i) { return std::popcount(m >> (i + 1)) % 2 == 0 ? 1 : -1; }

}  // namespace

PolyVectorField::PolyVectorField(int dim, int grade) : dim_(dim), grade_(grade) {
  if (dim < 1 || dim > kMaxDim) throw Error(ErrorCode::DimensionMismatch, "ambient dimension out of range");
  if (grade < 0 || grade > dim) throw Error(ErrorCode::MalformedInput, "polyvector grade out of range");
}

PolyVectorField PolyVectorField::function(const Polynomial& f) {
  PolyVectorField out(f.dim(), 0);
  out.add_component(IndexMask{0}, f);
  return out;
}

PolyVectorField PolyVectorField::basis(int dim, int axis) {
  if (axis < 0 || axis >= dim) throw Error(ErrorCode::PositionOutOfRange, "basis axis out of range");
  PolyVectorField out(dim, 1);
  out.add_component(IndexMask{1} << axis, Polynomial::constant(dim, 1));
  return out;
}

Polynomial PolyVectorField::component(IndexMask m) const {
  auto it = components_.find(m);
  return it == components_.end() ? Polynomial(dim_) : it->second;
}

Polynomial PolyVectorField::component(const std::vector<int>& indices) const {
  return component(indices_mask(indices));
}

void PolyVectorField::add_component(IndexMask m, const Polynomial& p) {
  if (mask_size(m) != grade_) throw Error(ErrorCode::MalformedInput, "component index count differs from grade");
  if (m >> dim_) throw Error(ErrorCode::PositionOutOfRange, "component index beyond ambient dimension");
  if (p.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "coefficient dimension mismatch");
  if (p.is_zero()) return;
  auto [it, inserted] = components_.try_emplace(m, p);
  if (!inserted) {
    it->second += p;
    if (it->second.is_zero()) components_.erase(it);
  }
}

void PolyVectorField::add_component(const std::vector<int>& indices, const Polynomial& p) {
  add_component(indices_mask(indices), p);
}

int PolyVectorField::degree() const noexcept {
  int d = -1;
  for (const auto& [m, p] : components_) d = std::max(d, p.degree());
  return d;
}

void PolyVectorField::check_compatible(const PolyVectorField& other) const {
  if (dim_ != other.dim_) throw Error(ErrorCode::DimensionMismatch, "polyvector dimension mismatch");
  if (grade_ != other.grade_) throw Error(ErrorCode::MalformedInput, "polyvector grade mismatch");
}

PolyVectorField& PolyVectorField::operator+=(const PolyVectorField& other) {
  if (other.is_zero() && other.dim_ == dim_) return *this;
  if (is_zero() && other.dim_ == dim_) grade_ = other.grade_;
  check_compatible(other);
  for (const auto& [m, p] : other.components_) add_component(m, p);
  return *this;
}

PolyVectorField& PolyVectorField::operator-=(const PolyVectorField& other) {
  if (other.is_zero() && other.dim_ == dim_) return *this;
  if (is_zero() && other.dim_ == dim_) grade_ = other.grade_;
  check_compatible(other);
  for (const auto& [m, p] : other.components_) add_component(m, -p);
  return *this;
}

PolyVectorField& PolyVectorField::operator*=(const Rational& r) {
  if (r == 0) {
    components_.clear();
    return *this;
  }
  for (auto& [m, p] : components_) p *= r;
  return *this;
}

PolyVectorField& PolyVectorField::operator*=(const Polynomial& f) {
  Components out;
  for (auto& [m, p] : components_) {
    Polynomial q = p * f;
    if (!q.is_zero()) out.emplace(m, std::move(q));
  }
  components_ = std::move(out);
  return *this;
}

bool PolyVectorField::operator==(const PolyVectorField& other) const {
  if (dim_ != other.dim_) return false;
  if (components_.empty() && other.components_.empty()) return true;
  return grade_ == other.grade_ && components_ == other.components_;
}

Polynomial PolyVectorField::evaluate(const std::vector<Polynomial>& fs) const {
  if (static_cast<int>(fs.size()) != grade_) throw Error(ErrorCode::ArityMismatch, "argument count differs from grade");
  Polynomial out(dim_);
  std::vector<std::vector<Polynomial>> grads;
  for (const auto& f : fs) {
    if (f.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "argument dimension mismatch");
    std::vector<Polynomial> g;
    for (int i = 0; i < dim_; ++i) g.push_back(f.derivative(i));
    grads.push_back(std::move(g));
  }
  for (const auto& [m, coeff] : components_) {
    const auto idx = mask_indices(m);
    // Determinant by permutation expansion; grades are small.
    std::vector<int> perm(idx.size());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = static_cast<int>(k);
    Polynomial det(dim_);
    do {
      int inversions = 0;
      for (std::size_t a = 0; a < perm.size(); ++a)
        for (std::size_t b = a + 1; b < perm.size(); ++b)
          if (perm[a] > perm[b]) ++inversions;
      Polynomial prod = Polynomial::constant(dim_, inversions % 2 == 0 ? 1 : -1);
      for (std::size_t a = 0; a < perm.size(); ++a)
        prod *= grads[static_cast<std::size_t>(perm[a])][static_cast<std::size_t>(idx[a])];
      det += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out += coeff * det;
  }
  return out;
}

FlatVector PolyVectorField::flatten() const {
  FlatVector out;
  for (const auto& [m, p] : components_)
    for (const auto& [e, c] : p.terms()) {
      FlatKey key{static_cast<int>(m)};
      for (int i = 0; i < dim_; ++i) key.push_back(e[i]);
      out.emplace(std::move(key), c);
    }
  return out;
}

std::string PolyVectorField::to_string() const {
  if (components_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, p] : components_) {
    if (!first) os << " + ";
    first = false;
    std::string basis;
    for (int i : mask_indices(m)) {
      if (!basis.empty()) basis += "^";
      basis += "d" + std::to_string(i + 1);
    }
    if (basis.empty()) {
      os << "(" << p.to_string() << ")";
    } else {
      os << "(" << p.to_string() << ")*(" << basis << ")";
    }
  }
  return os.str();
}

PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { return a += b; }
PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) { return a -= b; }
PolyVectorField operator-(PolyVectorField a) { return a *= Rational(-1); }
PolyVectorField operator*(const Rational& r, PolyVectorField a) { return a *= r; }

PolyVectorField wedge(const PolyVectorField& a, const PolyVectorField& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "polyvector dimension mismatch");
  const int grade = a.grade() + b.grade();
  if (grade > a.dim()) return PolyVectorField(a.dim(), 0);
  PolyVectorField out(a.dim(), grade);
  for (const auto& [ma, pa] : a.components())
    for (const auto& [mb, pb] : b.components()) {
      const int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      out.add_component(ma | mb, pa * pb * Rational(s));
    }
  return out;
}

namespace {

// Sum_i (P <-d/dxi_i) ^ (d/dx_i Q), accumulated into `out` with the given scale.
void schouten_half(const PolyVectorField& p, const PolyVectorField& q, const Rational& scale, PolyVectorField& out) {
  const int dim = p.dim();
  for (int i = 0; i < dim; ++i) {
    const IndexMask bit = IndexMask{1} << i;
    for (const auto& [mp, cp] : p.components()) {
      if (!(mp & bit)) continue;
      const IndexMask rest = mp & ~bit;
      const int s1 = right_derivative_sign(mp, i);
      for (const auto& [mq, cq] : q.components()) {
        const int s2 = wedge_sign(rest, mq);
        if (s2 == 0) continue;
        Polynomial dq = cq.derivative(i);
        if (dq.is_zero()) continue;
        out.add_component(rest | mq, cp * dq * (scale * (s1 * s2)));
      }
    }
  }
}

}  // namespace

PolyVectorField schouten(const PolyVectorField& a, const PolyVectorField& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "polyvector dimension mismatch");
  const int p = a.grade();
  const int q = b.grade();
  const int grade = p + q - 1;
  if (grade < 0 || grade > a.dim()) return PolyVectorField(a.dim(), 0);
  PolyVectorField out(a.dim(), grade);
  schouten_half(a, b, Rational(1), out);
  const int sign = ((p - 1) * (q - 1)) % 2 == 0 ? -1 : 1;
  schouten_half(b, a, Rational(sign), out);
  return out;
}

PoissonStructure::PoissonStructure(PolyVectorField bivector) : pi_(std::move(bivector)) {
  if (pi_.grade() != 2 && !pi_.is_zero()) throw Error(ErrorCode::MalformedInput, "Poisson structure must be a bivector");
  if (pi_.grade() != 2) pi_ = PolyVectorField(pi_.dim(), std::min(2, pi_.dim()));
  const PolyVectorField sq = schouten(pi_, pi_);
  if (!sq.is_zero()) throw Error(ErrorCode::NotPoisson, "[pi,pi] = " + sq.to_string());
}

PolyVectorField lichnerowicz_d(const PoissonStructure& pi, const PolyVectorField& y) {
  return schouten(pi.bivector(), y);
}

std::vector<PolyVectorField> polyvector_basis(int dim, int grade, int degree_bound) {
  std::vector<PolyVectorField> out;
  for (IndexMask m : masks_of_grade(dim, grade))
    for (const auto& e : multi_indices_up_to(dim, degree_bound)) {
      PolyVectorField f(dim, grade);
      f.add_component(m, Polynomial::monomial(e));
      out.push_back(std::move(f));
    }
  return out;
}

PoissonVerdict poisson_class_is_trivial(const PoissonStructure& pi, const PolyVectorField& z, int degree_bound) {
  if (pi.dim() != z.dim()) throw Error(ErrorCode::DimensionMismatch, "polyvector dimension mismatch");
  if (!lichnerowicz_d(pi, z).is_zero()) throw Error(ErrorCode::NotClosed, "d_pi(z) != 0");
  const int dim = z.dim();
  const int grade = z.grade();
  if (z.is_zero()) return PoissonTrivial{PolyVectorField(dim, grade > 0 ? grade - 1 : 0), degree_bound};
  if (grade == 0) return PoissonNontrivialAtBound{{}, degree_bound};

  const auto basis = polyvector_basis(dim, grade - 1, degree_bound);
  SystemAssembler assembler;
  for (const auto& w : basis) {
    const auto& [m, c] = *w.components().begin();
    assembler.add_unknown("w" + std::to_string(m) + ":" + c.to_string(), lichnerowicz_d(pi, w).flatten());
  }
  const LinearProblem problem = assembler.build(z.flatten());
  auto result = linear_solve(problem, {.want_kernel = false});
  if (auto* sol = std::get_if<Solution>(&result)) {
    PolyVectorField w(dim, grade - 1);
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (sol->particular[j] != 0) w += sol->particular[j] * basis[j];
    return PoissonTrivial{std::move(w), degree_bound};
  }
  return PoissonNontrivialAtBound{std::move(std::get<NoSolution>(result).certificate), degree_bound};
}

}  // namespace dq
