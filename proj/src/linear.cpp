#include "dq/linear.hpp"

#include <algorithm>
#include <optional>

#include "dq/errors.hpp"

namespace dq {

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Rational>>& dense) {
  const int r = static_cast<int>(dense.size());
  const int c = r == 0 ? 0 : static_cast<int>(dense.front().size());
  SparseMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(dense[static_cast<std::size_t>(i)].size()) != c)
      throw Error(ErrorCode::MalformedInput, "ragged dense matrix");
    for (int j = 0; j < c; ++j) {
      const Rational& v = dense[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (v != 0) m.row_data[static_cast<std::size_t>(i)].emplace_back(j, v);
    }
  }
  return m;
}

std::vector<Rational> SparseMatrix::multiply(const std::vector<Rational>& x) const {
  std::vector<Rational> out(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i)
    for (const auto& [j, v] : row_data[static_cast<std::size_t>(i)]) out[static_cast<std::size_t>(i)] += v * x[static_cast<std::size_t>(j)];
  return out;
}

std::vector<Rational> SparseMatrix::left_multiply(const std::vector<Rational>& y) const {
  std::vector<Rational> out(static_cast<std::size_t>(cols));
  for (int i = 0; i < rows; ++i) {
    const Rational& yi = y[static_cast<std::size_t>(i)];
    if (yi == 0) continue;
    for (const auto& [j, v] : row_data[static_cast<std::size_t>(i)]) out[static_cast<std::size_t>(j)] += yi * v;
  }
  return out;
}

void LinearProblem::validate() const {
  if (equations.cols != static_cast<int>(unknown_basis.size()))
    throw Error(ErrorCode::MalformedInput, "equation column count differs from unknown basis length");
  if (equations.rows != static_cast<int>(rhs.size()) ||
      static_cast<int>(equations.row_data.size()) != equations.rows)
    throw Error(ErrorCode::MalformedInput, "rhs length differs from equation count");
  for (const auto& row : equations.row_data) {
    int last = -1;
    for (const auto& [j, v] : row) {
      if (j <= last || j >= equations.cols || v == 0)
        throw Error(ErrorCode::MalformedInput, "sparse row not strictly increasing, out of range, or has zeros");
      last = j;
    }
  }
}

namespace {

struct WorkRow {
  SparseRow entries;
  Rational rhs;
  SparseRow combo;  // combination of original rows (only tracked when certificates are wanted)
};

// a += s * b on sorted sparse rows.
void axpy(SparseRow& a, const Rational& s, const SparseRow& b) {
  SparseRow out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(std::move(a[i++]));
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, s * b[j].second);
      ++j;
    } else {
      Rational v = a[i].second + s * b[j].second;
      if (v != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  a = std::move(out);
}

struct Echelon {
  std::map<int, WorkRow> pivots;  // pivot column -> normalized row whose first entry is that column
  std::optional<WorkRow> inconsistent;
};

Echelon eliminate(const LinearProblem& problem, bool track) {
  Echelon ech;
  for (int r = 0; r < problem.equations.rows; ++r) {
    WorkRow row{problem.equations.row_data[static_cast<std::size_t>(r)], problem.rhs[static_cast<std::size_t>(r)], {}};
    if (track) row.combo = {{r, Rational(1)}};
    while (!row.entries.empty()) {
      const int col = row.entries.front().first;
      auto it = ech.pivots.find(col);
      if (it == ech.pivots.end()) break;
      const Rational factor = -row.entries.front().second;
      axpy(row.entries, factor, it->second.entries);
      row.rhs += factor * it->second.rhs;
      if (track) axpy(row.combo, factor, it->second.combo);
    }
    if (row.entries.empty()) {
      if (row.rhs != 0) {
        ech.inconsistent = std::move(row);
        return ech;
      }
      continue;
    }
    const Rational lead = row.entries.front().second;
    if (lead != 1) {
      const Rational inv = 1 / lead;
      for (auto& e : row.entries) e.second *= inv;
      row.rhs *= inv;
      if (track)
        for (auto& e : row.combo) e.second *= inv;
    }
    const int col = row.entries.front().first;
    ech.pivots.emplace(col, std::move(row));
  }
  return ech;
}

std::vector<Rational> back_substitute(const Echelon& ech, int cols, const std::vector<Rational>& free_values,
                                      bool use_rhs) {
  std::vector<Rational> x = free_values;
  x.resize(static_cast<std::size_t>(cols));
  for (auto it = ech.pivots.rbegin(); it != ech.pivots.rend(); ++it) {
    const auto& row = it->second;
    Rational v = use_rhs ? row.rhs : Rational(0);
    for (std::size_t k = 1; k < row.entries.size(); ++k)
      v -= row.entries[k].second * x[static_cast<std::size_t>(row.entries[k].first)];
    x[static_cast<std::size_t>(it->first)] = v;
  }
  return x;
}

}  // namespace

SolveResult linear_solve(const LinearProblem& problem, SolveOptions options) {
  problem.validate();
  Echelon ech = eliminate(problem, false);
  if (ech.inconsistent) {
    // Re-run with row-combination tracking to extract the left-kernel certificate.
    Echelon tracked = eliminate(problem, true);
    NoSolution ns;
    ns.certificate.assign(static_cast<std::size_t>(problem.equations.rows), Rational(0));
    for (const auto& [r, v] : tracked.inconsistent->combo) ns.certificate[static_cast<std::size_t>(r)] = v;
    return ns;
  }
  const int cols = problem.equations.cols;
  Solution sol;
  sol.particular = back_substitute(ech, cols, std::vector<Rational>(static_cast<std::size_t>(cols)), true);
  if (options.want_kernel) {
    for (int j = 0; j < cols; ++j) {
      if (ech.pivots.count(j)) continue;
      std::vector<Rational> free_values(static_cast<std::size_t>(cols));
      free_values[static_cast<std::size_t>(j)] = 1;
      sol.kernel.push_back(back_substitute(ech, cols, free_values, false));
    }
  }
  return sol;
}

MembershipResult membership(const std::vector<Rational>& v, const std::vector<std::vector<Rational>>& generators) {
  for (const auto& g : generators)
    if (g.size() != v.size()) throw Error(ErrorCode::MalformedInput, "generator length differs from vector length");
  const int n = static_cast<int>(v.size());
  const int k = static_cast<int>(generators.size());
  LinearProblem problem;
  problem.equations = SparseMatrix(n, k);
  problem.rhs = v;
  for (int j = 0; j < k; ++j) problem.unknown_basis.push_back("g" + std::to_string(j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) {
      const Rational& a = generators[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if (a != 0) problem.equations.row_data[static_cast<std::size_t>(i)].emplace_back(j, a);
    }
  auto result = linear_solve(problem, {.want_kernel = false});
  if (auto* sol = std::get_if<Solution>(&result)) return InSpan{std::move(sol->particular)};
  return NotInSpan{std::move(std::get<NoSolution>(result).certificate)};
}

void accumulate(FlatVector& into, const FlatVector& from, const Rational& scale) {
  if (scale == 0) return;
  for (const auto& [k, v] : from) {
    auto [it, inserted] = into.try_emplace(k, v * scale);
    if (!inserted) {
      it->second += v * scale;
      if (it->second == 0) into.erase(it);
    }
  }
}

int SystemAssembler::add_unknown(std::string label, FlatVector image) {
  labels_.push_back(std::move(label));
  columns_.push_back(std::move(image));
  return static_cast<int>(labels_.size()) - 1;
}

LinearProblem SystemAssembler::build(const FlatVector& rhs) const {
  std::map<FlatKey, int> row_of;
  for (const auto& col : columns_)
    for (const auto& [k, v] : col) row_of.emplace(k, 0);
  for (const auto& [k, v] : rhs) row_of.emplace(k, 0);
  int next = 0;
  for (auto& [k, idx] : row_of) idx = next++;

  LinearProblem problem;
  problem.unknown_basis = labels_;
  problem.equations = SparseMatrix(next, static_cast<int>(columns_.size()));
  problem.rhs.assign(static_cast<std::size_t>(next), Rational(0));
  for (std::size_t j = 0; j < columns_.size(); ++j)
    for (const auto& [k, v] : columns_[j])
      problem.equations.row_data[static_cast<std::size_t>(row_of.at(k))].emplace_back(static_cast<int>(j), v);
  for (const auto& [k, v] : rhs) problem.rhs[static_cast<std::size_t>(row_of.at(k))] = v;
  return problem;
}

}  // namespace dq
