#include "dq/star_product.hpp"

#include <sstream>

#include "dq/errors.hpp"

namespace dq {

FormalFunction::FormalFunction(int dim, int truncation_order) : dim_(dim) {
  if (truncation_order < 0) throw Error(ErrorCode::TruncationMismatch, "negative truncation order");
  coeffs_.assign(static_cast<std::size_t>(truncation_order + 1), Polynomial(dim));
}

FormalFunction FormalFunction::constant_series(const Polynomial& f, int truncation_order) {
  FormalFunction out(f.dim(), truncation_order);
  out[0] = f;
  return out;
}

void FormalFunction::check_compatible(const FormalFunction& other) const {
  if (dim_ != other.dim_) throw Error(ErrorCode::DimensionMismatch, "formal function dimension mismatch");
  if (coeffs_.size() != other.coeffs_.size())
    throw Error(ErrorCode::TruncationMismatch, "formal functions truncated at different orders");
}

FormalFunction& FormalFunction::operator+=(const FormalFunction& other) {
  check_compatible(other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

FormalFunction& FormalFunction::operator-=(const FormalFunction& other) {
  check_compatible(other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

std::string FormalFunction::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    if (k == 0) {
      os << "(" << coeffs_[k].to_string() << ")";
    } else {
      os << "h^" << k << "*(" << coeffs_[k].to_string() << ")";
    }
  }
  return first ? "0" : os.str();
}

FormalFunction operator+(FormalFunction a, const FormalFunction& b) { return a += b; }
FormalFunction operator-(FormalFunction a, const FormalFunction& b) { return a -= b; }

StarProduct::StarProduct(int dim, std::vector<PolyDiffOp> b) : dim_(dim), mu_(PolyDiffOp::multiplication(dim)) {
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (b[k].dim() != dim) throw Error(ErrorCode::DimensionMismatch, "B_" + std::to_string(k + 1) + " dimension mismatch");
    if (b[k].arity() != 2) {
      if (!b[k].is_zero()) throw Error(ErrorCode::ArityMismatch, "B_" + std::to_string(k + 1) + " must be binary");
      b[k] = PolyDiffOp(dim, 2);
    }
  }
  b_ = std::move(b);
}

const PolyDiffOp& StarProduct::b(int k) const {
  if (k == 0) return mu_;
  if (k < 0 || k > truncation_order()) throw Error(ErrorCode::TruncationMismatch, "B_" + std::to_string(k) + " beyond truncation");
  return b_[static_cast<std::size_t>(k - 1)];
}

PolyVectorField StarProduct::poisson_bivector() const {
  if (b_.empty() || dim_ < 2) return PolyVectorField(dim_, std::min(dim_, 2));
  return Rational(2) * skew_symbol(b_.front());
}

bool StarProduct::has_parity_pattern() const {
  for (int k = 1; k <= truncation_order(); ++k) {
    const PolyDiffOp swapped = b(k).permuted({1, 0});
    const PolyDiffOp expected = k % 2 == 0 ? b(k) : -b(k);
    if (!(swapped == expected)) return false;
  }
  return true;
}

StarProduct StarProduct::truncated(int order) const {
  if (order < 0 || order > truncation_order()) throw Error(ErrorCode::TruncationMismatch, "truncation beyond available order");
  return StarProduct(dim_, std::vector<PolyDiffOp>(b_.begin(), b_.begin() + order));
}

StarProduct StarProduct::extended(const PolyDiffOp& next) const {
  std::vector<PolyDiffOp> b = b_;
  b.push_back(next);
  return StarProduct(dim_, std::move(b));
}

StarProduct moyal_build(const PoissonStructure& pi, int order) {
  const PolyVectorField& bv = pi.bivector();
  const int dim = bv.dim();
  if (!pi.has_constant_coefficients()) throw Error(ErrorCode::NonConstantCoefficients, "Moyal product needs a constant bivector");
  if (order < 0) throw Error(ErrorCode::TruncationMismatch, "negative truncation order");

  // P = sum pi^{ij} d_i (x) d_j with pi^{ji} = -pi^{ij}; B_k = P^k / (2^k k!).
  using Symbol = std::map<std::pair<MultiIndex, MultiIndex>, Rational>;
  Symbol p1;
  for (const auto& [m, c] : bv.components()) {
    const auto idx = mask_indices(m);
    const Rational v = c.coefficient(MultiIndex(dim));
    const MultiIndex ei = MultiIndex::unit(dim, idx[0]);
    const MultiIndex ej = MultiIndex::unit(dim, idx[1]);
    p1[{ei, ej}] += v;
    p1[{ej, ei}] -= v;
  }
  std::vector<PolyDiffOp> b;
  Symbol power{{{MultiIndex(dim), MultiIndex(dim)}, Rational(1)}};
  Rational scale = 1;
  for (int k = 1; k <= order; ++k) {
    Symbol next;
    for (const auto& [ab, c] : power)
      for (const auto& [cd, d] : p1) {
        Rational& slot = next[{ab.first + cd.first, ab.second + cd.second}];
        slot += c * d;
      }
    power.clear();
    for (auto& [key, c] : next)
      if (c != 0) power.emplace(key, c);
    scale /= 2 * k;
    PolyDiffOp bk(dim, 2);
    for (const auto& [key, c] : power) bk.add_term({key.first, key.second}, Polynomial::constant(dim, c * scale));
    b.push_back(std::move(bk));
  }
  return StarProduct(dim, std::move(b));
}

FormalFunction star_multiply(const StarProduct& s, const FormalFunction& f, const FormalFunction& g) {
  if (f.dim() != s.dim() || g.dim() != s.dim()) throw Error(ErrorCode::DimensionMismatch, "formal function dimension mismatch");
  const int n = s.truncation_order();
  if (f.truncation_order() != n || g.truncation_order() != n)
    throw Error(ErrorCode::TruncationMismatch, "formal functions must share the star product's truncation order");
  FormalFunction out(s.dim(), n);
  for (int a = 0; a <= n; ++a) {
    if (f[a].is_zero()) continue;
    for (int c = 0; a + c <= n; ++c) {
      if (g[c].is_zero()) continue;
      for (int k = 0; a + c + k <= n; ++k) out[a + c + k] += apply(s.b(k), {f[a], g[c]});
    }
  }
  return out;
}

PolyDiffOp mc_defect(const StarProduct& s, int order) {
  if (order < 1 || order > s.truncation_order()) throw Error(ErrorCode::TruncationMismatch, "defect order outside truncation");
  PolyDiffOp out = hochschild_delta(s.b(order));
  PolyDiffOp sum(s.dim(), 3);
  for (int i = 1; i < order; ++i) sum += gerstenhaber(s.b(i), s.b(order - i));
  out -= Rational(1, 2) * sum;
  return out;
}

std::vector<MCDefectReport> verify_mc(const StarProduct& s, int through_order) {
  if (through_order > s.truncation_order()) throw Error(ErrorCode::TruncationMismatch, "verification order beyond truncation");
  std::vector<MCDefectReport> out;
  for (int m = 1; m <= through_order; ++m) {
    MCDefectReport r{m, mc_defect(s, m), false};
    r.is_zero = r.defect.is_zero();
    out.push_back(std::move(r));
  }
  return out;
}

bool mc_all_zero(const std::vector<MCDefectReport>& reports) {
  for (const auto& r : reports)
    if (!r.is_zero) return false;
  return true;
}

MCExtendResult mc_extend(const StarProduct& s, const AnsatzBounds& bounds) {
  const int n = s.truncation_order();
  for (const auto& r : verify_mc(s, n))
    if (!r.is_zero) throw Error(ErrorCode::MCDefect, "associativity fails at order " + std::to_string(r.order));
  PolyDiffOp rhs(s.dim(), 3);
  for (int i = 1; i <= n; ++i) rhs += gerstenhaber(s.b(i), s.b(n + 1 - i));
  rhs *= Rational(1, 2);
  if (!hochschild_delta(rhs).is_zero())
    throw Error(ErrorCode::RHSNotClosed, "order " + std::to_string(n + 1) + " right-hand side is not a cocycle");
  auto result = cocycle_primitive(rhs, bounds);
  if (auto* prim = std::get_if<Primitive>(&result)) {
    PolyDiffOp next = prim->psi.is_zero() ? PolyDiffOp(s.dim(), 2) : prim->psi;
    StarProduct ext = s.extended(next);
    if (!mc_defect(ext, n + 1).is_zero()) throw Error(ErrorCode::IntegrityFailure, "extension fails its own defect check");
    return MCExtension{std::move(next), std::move(ext)};
  }
  auto& none = std::get<NoneAtBound>(result);
  return MCExtensionNoneAtBound{std::move(rhs), bounds, std::move(none.certificate)};
}

std::vector<PolyDiffOp> compose_series(const std::vector<PolyDiffOp>& a, const std::vector<PolyDiffOp>& b, int order) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::MalformedInput, "empty operator series");
  const int dim = a.front().dim();
  std::vector<PolyDiffOp> out;
  for (int n = 0; n <= order; ++n) {
    PolyDiffOp t(dim, 1);
    for (int i = 0; i <= n; ++i) {
      const int j = n - i;
      if (i >= static_cast<int>(a.size()) || j >= static_cast<int>(b.size())) continue;
      const auto& ai = a[static_cast<std::size_t>(i)];
      const auto& bj = b[static_cast<std::size_t>(j)];
      if (ai.is_zero() || bj.is_zero()) continue;
      t += circ_k(ai, bj, 1);
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<PolyDiffOp> inverse_series(int dim, const std::vector<PolyDiffOp>& t) {
  // S_0 = 1, S_n = -sum_{k=1}^{n} T_k o S_{n-k}.
  std::vector<PolyDiffOp> s{PolyDiffOp::identity(dim)};
  for (std::size_t n = 1; n <= t.size(); ++n) {
    PolyDiffOp sn(dim, 1);
    for (std::size_t k = 1; k <= n; ++k) {
      const auto& tk = t[k - 1];
      if (tk.is_zero() || s[n - k].is_zero()) continue;
      sn -= circ_k(tk, s[n - k], 1);
    }
    s.push_back(std::move(sn));
  }
  return s;
}

StarProduct gauge_transform(const StarProduct& s, const std::vector<PolyDiffOp>& t) {
  const int dim = s.dim();
  const int n = s.truncation_order();
  std::vector<PolyDiffOp> tt{PolyDiffOp::identity(dim)};
  for (int k = 1; k <= n; ++k) {
    if (k <= static_cast<int>(t.size())) {
      const auto& tk = t[static_cast<std::size_t>(k - 1)];
      if (tk.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "gauge term dimension mismatch");
      if (!tk.is_zero() && tk.arity() != 1) throw Error(ErrorCode::ArityMismatch, "gauge terms must be unary");
      tt.push_back(tk.is_zero() ? PolyDiffOp(dim, 1) : tk);
    } else {
      tt.push_back(PolyDiffOp(dim, 1));
    }
  }
  const std::vector<PolyDiffOp> inv = inverse_series(dim, std::vector<PolyDiffOp>(tt.begin() + 1, tt.end()));

  // inner[m] = sum_{b+c+d=m} B_b(S_c ., S_d .)
  std::vector<PolyDiffOp> inner(static_cast<std::size_t>(n + 1), PolyDiffOp(dim, 2));
  for (int b = 0; b <= n; ++b) {
    if (s.b(b).is_zero()) continue;
    for (int c = 0; b + c <= n; ++c) {
      if (inv[static_cast<std::size_t>(c)].is_zero()) continue;
      const PolyDiffOp left = circ_k(s.b(b), inv[static_cast<std::size_t>(c)], 1);
      for (int d = 0; b + c + d <= n; ++d) {
        if (inv[static_cast<std::size_t>(d)].is_zero()) continue;
        inner[static_cast<std::size_t>(b + c + d)] += circ_k(left, inv[static_cast<std::size_t>(d)], 2);
      }
    }
  }
  std::vector<PolyDiffOp> out;
  for (int m = 1; m <= n; ++m) {
    PolyDiffOp bm(dim, 2);
    for (int a = 0; a <= m; ++a) {
      if (tt[static_cast<std::size_t>(a)].is_zero() || inner[static_cast<std::size_t>(m - a)].is_zero()) continue;
      bm += circ_k(tt[static_cast<std::size_t>(a)], inner[static_cast<std::size_t>(m - a)], 1);
    }
    out.push_back(std::move(bm));
  }
  return StarProduct(dim, std::move(out));
}

}  // namespace dq
