#include "dq/session.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>

#include "dq/errors.hpp"

namespace dq {

std::string_view to_string(DefinitionKind kind) {
  switch (kind) {
    case DefinitionKind::Poly: return "poly";
    case DefinitionKind::Mvf: return "mvf";
    case DefinitionKind::Op: return "op";
    case DefinitionKind::Star: return "star";
    case DefinitionKind::Lie: return "lie";
    case DefinitionKind::Action: return "action";
    case DefinitionKind::Cochain: return "cochain";
    case DefinitionKind::Series: return "series";
  }
  return "unknown";
}

std::vector<PolyDiffOp> SeriesDefinition::dense(int dim, int from, int to) const {
  std::vector<PolyDiffOp> out;
  for (int n = from; n <= to; ++n) {
    auto it = entries.find(n);
    out.push_back(it == entries.end() ? PolyDiffOp(dim, 1) : it->second);
  }
  return out;
}

const Definition* SessionFile::find(const std::string& name) const {
  for (const auto& d : definitions)
    if (d.name == name) return &d;
  return nullptr;
}

const Definition& SessionFile::require(const std::string& name, DefinitionKind kind) const {
  const Definition* d = find(name);
  if (!d) throw Error(ErrorCode::ResolveError, "unknown name '" + name + "'");
  if (d->kind != kind)
    throw Error(ErrorCode::ResolveError, "'" + name + "' is a " + std::string(to_string(d->kind)) + ", expected a " +
                                             std::string(to_string(kind)));
  return *d;
}

int default_order(int fallback) {
  const char* env = std::getenv("DQ_DEFAULT_ORDER");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0 || v > 64) throw Error(ErrorCode::UsageError, "DQ_DEFAULT_ORDER must be an integer in 0..64");
  return static_cast<int>(v);
}

namespace {

const std::set<std::string> kKeywords = {"dim", "poly", "mvf", "op", "star", "lie", "action", "cochain", "series", "run", "moyal"};

bool reserved_name(const std::string& s) {
  if (kKeywords.count(s) || s == "d") return true;
  if (s.size() >= 2 && (s[0] == 'x' || s[0] == 'd' || s[0] == 'e'))
    return std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  return false;
}

// e3 -> 2 (0-based), else -1.
int lie_index(const Token& t) {
  if (t.kind != TokenKind::Ident || t.text.size() < 2 || t.text[0] != 'e' || t.text.size() > 3) return -1;
  for (std::size_t k = 1; k < t.text.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(t.text[k]))) return -1;
  const int i = std::stoi(t.text.substr(1));
  return i >= 1 ? i - 1 : -1;
}

class SessionParser {
 public:
  explicit SessionParser(std::string_view text) : ts_(std::vector<Token>{}) {
    // `run` lines are kept verbatim and blanked before tokenizing, so line numbers stay put.
    std::string cleaned;
    std::size_t start = 0;
    int line = 1;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view l = text.substr(start, end - start);
      std::size_t k = l.find_first_not_of(" \t\r");
      if (k != std::string_view::npos && l.substr(k, 3) == "run" && (l.size() == k + 3 || std::isspace(static_cast<unsigned char>(l[k + 3])))) {
        std::string cmd(l.substr(k + 3));
        if (auto h = cmd.find('#'); h != std::string::npos) cmd.resize(h);
        const auto a = cmd.find_first_not_of(" \t\r");
        const auto b = cmd.find_last_not_of(" \t\r");
        if (a == std::string::npos) throw ParseError(line, static_cast<int>(k) + 1, "run", "empty run directive");
        out_.directives.push_back(cmd.substr(a, b - a + 1));
      } else {
        cleaned += l;
      }
      if (end == text.size()) break;
      cleaned += '\n';
      start = end + 1;
      ++line;
    }
    ts_ = TokenStream(tokenize(cleaned));
  }

  SessionFile parse() {
    while (true) {
      ts_.skip_newlines();
      if (ts_.peek().kind == TokenKind::End) break;
      statement();
      end_of_statement();
    }
    return std::move(out_);
  }

 private:
  void end_of_statement() {
    ts_.accept_symbol(";");
    const Token& t = ts_.peek();
    if (t.kind != TokenKind::Newline && t.kind != TokenKind::End) ts_.fail(t, "expected end of line");
  }

  void statement() {
    const Token kw = ts_.expect_ident();
    if (kw.text == "dim") {
      if (out_.dim != 0) ts_.fail(kw, "dimension declared twice");
      if (!out_.definitions.empty()) ts_.fail(kw, "dim must come before definitions");
      const Token n = ts_.next();
      if (n.kind != TokenKind::Number || n.text.size() > 2 || std::stoi(n.text) < 1 || std::stoi(n.text) > kMaxDim)
        ts_.fail(n, "dimension must be an integer in 1.." + std::to_string(kMaxDim));
      out_.dim = std::stoi(n.text);
      return;
    }
    static const std::map<std::string, DefinitionKind> kinds = {
        {"poly", DefinitionKind::Poly},   {"mvf", DefinitionKind::Mvf},         {"op", DefinitionKind::Op},
        {"star", DefinitionKind::Star},   {"lie", DefinitionKind::Lie},         {"action", DefinitionKind::Action},
        {"cochain", DefinitionKind::Cochain}, {"series", DefinitionKind::Series}};
    auto it = kinds.find(kw.text);
    if (it == kinds.end()) ts_.fail(kw, "unknown statement");
    if (out_.dim == 0) ts_.fail(kw, "missing 'dim' declaration before definitions");

    std::optional<CoefficientKind> cochain_kind;
    if (it->second == DefinitionKind::Cochain && ts_.peek().kind == TokenKind::Ident && ts_.peek(1).kind == TokenKind::Ident) {
      const Token k = ts_.next();
      if (k.text == "poly") cochain_kind = CoefficientKind::Polynomial;
      else if (k.text == "mvf") cochain_kind = CoefficientKind::PolyVector;
      else if (k.text == "op") cochain_kind = CoefficientKind::PolyDiff;
      else ts_.fail(k, "cochain kind must be poly, mvf or op");
    }

    const Token name = ts_.expect_ident();
    if (reserved_name(name.text)) ts_.fail(name, "reserved name");
    if (out_.find(name.text)) ts_.fail(name, "name already defined");

    Definition def;
    def.name = name.text;
    def.kind = it->second;
    def.line = name.line;
    try {
      switch (def.kind) {
        case DefinitionKind::Poly:
          ts_.expect_symbol("=");
          def.value = value_as_polynomial(parse_value(ts_, out_.dim), out_.dim);
          break;
        case DefinitionKind::Mvf:
          ts_.expect_symbol("=");
          def.value = value_as_polyvector(parse_value(ts_, out_.dim), out_.dim);
          break;
        case DefinitionKind::Op: {
          ts_.expect_symbol("=");
          Value v = parse_value(ts_, out_.dim);
          if (auto* o = std::get_if<PolyDiffOp>(&v)) {
            def.value = *o;
          } else if (auto* p = std::get_if<Polynomial>(&v)) {
            def.value = PolyDiffOp::function(*p);
          } else {
            throw Error(ErrorCode::KindMismatch, "expected an operator, got a polyvector field");
          }
          break;
        }
        case DefinitionKind::Star: def.value = star(name); break;
        case DefinitionKind::Lie: def.value = lie(name); break;
        case DefinitionKind::Action: def.value = action(name); break;
        case DefinitionKind::Cochain: def.value = cochain(name, cochain_kind); break;
        case DefinitionKind::Series: def.value = series(); break;
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(name.line, name.column, name.text, e.what(), e.code());
    }
    out_.definitions.push_back(std::move(def));
  }

  const Definition& resolve(const Token& t, DefinitionKind kind) {
    const Definition* d = out_.find(t.text);
    if (!d) throw ParseError(t.line, t.column, t.text, "unknown name", ErrorCode::ResolveError);
    if (d->kind != kind)
      throw ParseError(t.line, t.column, t.text, "expected a " + std::string(to_string(kind)) + " definition",
                       ErrorCode::ResolveError);
    return *d;
  }

  StarDefinition star(const Token& name) {
    ts_.expect_symbol("=");
    if (ts_.peek().kind == TokenKind::Ident && ts_.peek().text == "moyal") {
      ts_.next();
      ts_.expect_symbol("(");
      const Token pi_name = ts_.expect_ident();
      const auto& pi = std::get<PolyVectorField>(resolve(pi_name, DefinitionKind::Mvf).value);
      int order = default_order(4);
      if (ts_.accept_symbol(",")) {
        const Token key = ts_.expect_ident();
        if (key.text != "order") ts_.fail(key, "expected 'order'");
        ts_.expect_symbol("=");
        const Token n = ts_.next();
        if (n.kind != TokenKind::Number || n.text.size() > 2) ts_.fail(n, "expected an order");
        order = std::stoi(n.text);
      }
      ts_.expect_symbol(")");
      try {
        return StarDefinition{moyal_build(PoissonStructure(pi), order), pi_name.text};
      } catch (const Error& e) {
        throw ParseError(pi_name.line, pi_name.column, pi_name.text, e.what(), e.code());
      }
    }
    std::map<int, PolyDiffOp> b;
    block([&] {
      const Token key = ts_.expect_ident();
      const int k = trailing_order(key, "B");
      if (k < 1) ts_.fail(key, "expected B1, B2, ...");
      if (b.count(k)) ts_.fail(key, "duplicate entry");
      ts_.expect_symbol("=");
      b[k] = located_operator(key, 2);
    });
    const int n = b.empty() ? 0 : b.rbegin()->first;
    std::vector<PolyDiffOp> coeffs;
    for (int k = 1; k <= n; ++k) coeffs.push_back(b.count(k) ? b[k] : PolyDiffOp(out_.dim, 2));
    (void)name;
    return StarDefinition{StarProduct(out_.dim, std::move(coeffs)), std::nullopt};
  }

  PolyDiffOp located_operator(const Token& at, int arity) {
    const Token start = ts_.peek();
    Value v = parse_value(ts_, out_.dim);
    try {
      return value_as_operator(v, out_.dim, arity);
    } catch (const Error& e) {
      throw ParseError(start.line, start.column, start.text, at.text + ": " + e.what(), e.code());
    }
  }

  // Index following the prefix (B2 -> 2); -1 when malformed.
  static int trailing_order(const Token& t, const std::string& prefix) {
    if (t.text.size() <= prefix.size() || t.text.compare(0, prefix.size(), prefix) != 0) return -1;
    const std::string digits = t.text.substr(prefix.size());
    if (digits.size() > 2 || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      return -1;
    return std::stoi(digits);
  }

  template <class F>
  void block(F entry) {
    ts_.expect_symbol("{");
    ts_.skip_newlines();
    if (ts_.accept_symbol("}")) return;
    while (true) {
      entry();
      ts_.skip_newlines();
      if (ts_.accept_symbol("}")) return;
      ts_.expect_symbol(",");
      ts_.skip_newlines();
    }
  }

  // Linear combination of e_k.
  std::vector<std::pair<int, Rational>> lie_combination() {
    std::vector<std::pair<int, Rational>> out;
    bool first = true;
    while (true) {
      Rational sign = 1;
      if (ts_.accept_symbol("-")) {
        sign = -1;
      } else if (!ts_.accept_symbol("+") && !first) {
        break;
      }
      first = false;
      Rational c = 1;
      if (ts_.peek().kind == TokenKind::Number) {
        c = Rational(ts_.next().text);
        if (ts_.accept_symbol("/")) {
          const Token d = ts_.next();
          if (d.kind != TokenKind::Number || d.text == "0") ts_.fail(d, "expected a nonzero denominator");
          c /= Rational(d.text);
        }
        if (!ts_.accept_symbol("*")) {
          if (c != 0) ts_.fail(ts_.peek(), "expected '*' and a basis element");
          continue;
        }
      }
      const Token e = ts_.next();
      const int i = lie_index(e);
      if (i < 0) ts_.fail(e, "expected a Lie basis element e1, e2, ...");
      out.emplace_back(i, sign * c);
    }
    return out;
  }

  LieAlgebra lie(const Token& name) {
    int dim = 0;
    if (ts_.accept_symbol("(")) {
      const Token n = ts_.next();
      if (n.kind != TokenKind::Number || n.text.size() > 2 || n.text == "0") ts_.fail(n, "expected a positive dimension");
      dim = std::stoi(n.text);
      ts_.expect_symbol(")");
    }
    ts_.expect_symbol("=");
    struct Entry {
      Token at;
      int i, j;
      std::vector<std::pair<int, Rational>> rhs;
    };
    std::vector<Entry> entries;
    int seen = 0;
    block([&] {
      const Token open = ts_.expect_symbol("[");
      const Token a = ts_.next();
      ts_.expect_symbol(",");
      const Token b = ts_.next();
      ts_.expect_symbol("]");
      const int i = lie_index(a), j = lie_index(b);
      if (i < 0) ts_.fail(a, "expected a Lie basis element");
      if (j < 0) ts_.fail(b, "expected a Lie basis element");
      ts_.expect_symbol("=");
      auto rhs = lie_combination();
      seen = std::max({seen, i + 1, j + 1});
      for (const auto& [k, c] : rhs) seen = std::max(seen, k + 1);
      entries.push_back({open, i, j, std::move(rhs)});
    });
    if (dim == 0) dim = seen;
    if (dim == 0) ts_.fail(name, "cannot infer the dimension of an empty Lie algebra; write lie g(n) = {}");
    if (seen > dim) ts_.fail(name, "basis element beyond the declared dimension");
    std::vector<std::pair<std::pair<int, int>, std::vector<Rational>>> brackets;
    for (const auto& e : entries) {
      if (e.i == e.j) ts_.fail(e.at, "bracket of a basis element with itself");
      std::vector<Rational> v(static_cast<std::size_t>(dim));
      for (const auto& [k, c] : e.rhs) v[static_cast<std::size_t>(k)] += c;
      if (e.i > e.j) {
        for (auto& c : v) c = -c;
        brackets.push_back({{e.j, e.i}, v});
      } else {
        brackets.push_back({{e.i, e.j}, v});
      }
    }
    std::set<std::pair<int, int>> pairs;
    for (std::size_t k = 0; k < brackets.size(); ++k)
      if (!pairs.insert(brackets[k].first).second) ts_.fail(entries[k].at, "bracket given twice");
    return LieAlgebra::from_brackets(dim, brackets);
  }

  std::string algebra_reference(const Token& name) {
    if (ts_.accept_symbol(":")) {
      const Token g = ts_.expect_ident();
      resolve(g, DefinitionKind::Lie);
      return g.text;
    }
    for (auto it = out_.definitions.rbegin(); it != out_.definitions.rend(); ++it)
      if (it->kind == DefinitionKind::Lie) return it->name;
    throw ParseError(name.line, name.column, name.text, "no Lie algebra defined before this line", ErrorCode::ResolveError);
  }

  ActionDefinition action(const Token& name) {
    const std::string g_name = algebra_reference(name);
    const auto& g = std::get<LieAlgebra>(out_.find(g_name)->value);
    ts_.expect_symbol("=");
    std::vector<std::optional<PolyVectorField>> images(static_cast<std::size_t>(g.dim()));
    block([&] {
      const Token e = ts_.next();
      const int i = lie_index(e);
      if (i < 0 || i >= g.dim()) ts_.fail(e, "expected a basis element of " + g_name);
      if (images[static_cast<std::size_t>(i)]) ts_.fail(e, "image given twice");
      ts_.expect_symbol("->");
      const Token start = ts_.peek();
      PolyVectorField x = value_as_polyvector(parse_value(ts_, out_.dim), out_.dim);
      if (x.is_zero()) x = PolyVectorField(out_.dim, 1);
      if (x.grade() != 1) ts_.fail(start, "action images must be vector fields");
      images[static_cast<std::size_t>(i)] = std::move(x);
    });
    std::vector<PolyVectorField> fields;
    for (auto& x : images) fields.push_back(x ? *x : PolyVectorField(out_.dim, 1));
    return ActionDefinition{g_name, Action(g, std::move(fields))};
  }

  CochainDefinition cochain(const Token& name, std::optional<CoefficientKind> kind) {
    const std::string g_name = algebra_reference(name);
    const int m = std::get<LieAlgebra>(out_.find(g_name)->value).dim();
    ts_.expect_symbol("=");
    struct Entry {
      Token at;
      std::vector<int> tuple;
      Value v;
    };
    std::vector<Entry> entries;
    block([&] {
      Entry e{ts_.peek(), {}, Polynomial(out_.dim)};
      auto basis = [&] {
        const Token t = ts_.next();
        const int i = lie_index(t);
        if (i < 0 || i >= m) ts_.fail(t, "expected a basis element of " + g_name);
        e.tuple.push_back(i);
      };
      if (ts_.accept_symbol("[")) {
        if (!ts_.accept_symbol("]")) {
          do basis();
          while (ts_.accept_symbol(","));
          ts_.expect_symbol("]");
        }
      } else {
        basis();
      }
      ts_.expect_symbol("->");
      e.v = parse_value(ts_, out_.dim);
      entries.push_back(std::move(e));
    });
    if (entries.empty()) ts_.fail(name, "cannot infer the degree of an empty cochain");
    const int degree = static_cast<int>(entries.front().tuple.size());
    if (!kind) {
      kind = CoefficientKind::Polynomial;
      for (const auto& e : entries)
        if (!is_zero_value(e.v)) {
          kind = kind_of(e.v);
          break;
        }
    }
    CECochain c(m, degree, *kind);
    std::set<IndexMask> seen;
    for (auto& e : entries) {
      if (static_cast<int>(e.tuple.size()) != degree) ts_.fail(e.at, "tuples of different lengths");
      // Sort the tuple, tracking the permutation sign.
      int sign = 1;
      for (std::size_t a = 0; a < e.tuple.size(); ++a)
        for (std::size_t b = 0; b + 1 < e.tuple.size() - a; ++b)
          if (e.tuple[b] > e.tuple[b + 1]) {
            std::swap(e.tuple[b], e.tuple[b + 1]);
            sign = -sign;
          }
      for (std::size_t a = 1; a < e.tuple.size(); ++a)
        if (e.tuple[a] == e.tuple[a - 1]) ts_.fail(e.at, "repeated basis element");
      if (!seen.insert(indices_mask(e.tuple)).second) ts_.fail(e.at, "tuple given twice");
      CoefficientValue v;
      switch (*kind) {
        case CoefficientKind::Polynomial: v = value_as_polynomial(e.v, out_.dim); break;
        case CoefficientKind::PolyVector: v = value_as_polyvector(e.v, out_.dim); break;
        case CoefficientKind::PolyDiff: {
          const int arity = e.v.index() == 2 ? std::get<PolyDiffOp>(e.v).arity() : 1;
          v = value_as_operator(e.v, out_.dim, arity);
          break;
        }
      }
      if (is_zero_value(v)) continue;
      std::visit([&](auto& x) { x *= Rational(sign); }, v);
      c.add_value(e.tuple, v);
    }
    return CochainDefinition{g_name, std::move(c)};
  }

  SeriesDefinition series() {
    ts_.expect_symbol("=");
    SeriesDefinition s;
    bool first = true;
    block([&] {
      const Token key = ts_.expect_ident();
      std::size_t cut = key.text.size();
      while (cut > 0 && std::isdigit(static_cast<unsigned char>(key.text[cut - 1]))) --cut;
      if (cut == 0 || cut == key.text.size() || key.text.size() - cut > 2) ts_.fail(key, "expected an entry like T1");
      const std::string prefix = key.text.substr(0, cut);
      if (first) s.prefix = prefix;
      else if (prefix != s.prefix) ts_.fail(key, "entries must share the prefix '" + s.prefix + "'");
      first = false;
      const int n = std::stoi(key.text.substr(cut));
      if (s.entries.count(n)) ts_.fail(key, "duplicate entry");
      ts_.expect_symbol("=");
      s.entries[n] = located_operator(key, 1);
    });
    if (s.prefix.empty()) s.prefix = "T";
    return s;
  }

  TokenStream ts_;
  SessionFile out_;
};

std::string lie_string(const LieAlgebra& g) {
  std::string out = "(" + std::to_string(g.dim()) + ") = {";
  bool first = true;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = i + 1; j < g.dim(); ++j) {
      std::string rhs;
      for (int k = 0; k < g.dim(); ++k) {
        const Rational& c = g.c(i, j, k);
        if (c == 0) continue;
        const Rational mag = abs(c);
        rhs += rhs.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
        if (mag != 1) rhs += mag.get_str() + "*";
        rhs += "e" + std::to_string(k + 1);
      }
      if (rhs.empty()) continue;
      out += std::string(first ? " " : ", ") + "[e" + std::to_string(i + 1) + ",e" + std::to_string(j + 1) + "] = " + rhs;
      first = false;
    }
  return out + (first ? "}" : " }");
}

std::string cochain_kind_word(CoefficientKind k) {
  switch (k) {
    case CoefficientKind::Polynomial: return "poly";
    case CoefficientKind::PolyVector: return "mvf";
    case CoefficientKind::PolyDiff: return "op";
  }
  return "poly";
}

}  // namespace

SessionFile parse_session(std::string_view text) { return SessionParser(text).parse(); }

std::string serialize_session(const SessionFile& s) {
  std::ostringstream os;
  os << "dim " << s.dim << "\n";
  for (const auto& d : s.definitions) {
    if (d.kind != DefinitionKind::Cochain) os << to_string(d.kind) << " ";
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Polynomial> || std::is_same_v<T, PolyVectorField> || std::is_same_v<T, PolyDiffOp>) {
            os << d.name << " = " << canonical_string(v);
          } else if constexpr (std::is_same_v<T, StarDefinition>) {
            os << d.name << " = ";
            if (v.moyal_bivector) {
              os << "moyal(" << *v.moyal_bivector << ", order=" << v.star.truncation_order() << ")";
            } else {
              os << "{";
              for (int k = 1; k <= v.star.truncation_order(); ++k)
                os << (k == 1 ? " " : ", ") << "B" << k << " = " << canonical_string(v.star.b(k));
              os << (v.star.truncation_order() ? " }" : "}");
            }
          } else if constexpr (std::is_same_v<T, LieAlgebra>) {
            os << d.name << lie_string(v);
          } else if constexpr (std::is_same_v<T, ActionDefinition>) {
            os << d.name << " : " << v.algebra << " = {";
            for (int i = 0; i < v.action.algebra().dim(); ++i)
              os << (i ? ", " : " ") << "e" << i + 1 << " -> " << canonical_string(v.action.image(i));
            os << " }";
          } else if constexpr (std::is_same_v<T, CochainDefinition>) {
            const CECochain& c = v.cochain;
            os << "cochain " << cochain_kind_word(c.kind()) << " " << d.name << " : " << v.algebra << " = {";
            bool first = true;
            auto tuple_string = [](IndexMask m) {
              std::string t = "[";
              for (int i : mask_indices(m)) t += (t.size() > 1 ? ",e" : "e") + std::to_string(i + 1);
              return t + "]";
            };
            for (const auto& [t, val] : c.values()) {
              os << (first ? " " : ", ") << tuple_string(t) << " -> " << canonical_string(val);
              first = false;
            }
            if (first) {
              // Empty cochain: keep the degree with an explicit zero entry.
              std::vector<int> idx;
              for (int i = 0; i < c.degree(); ++i) idx.push_back(i);
              os << " " << tuple_string(indices_mask(idx)) << " -> 0";
            }
            os << " }";
          } else {
            os << d.name << " = {";
            bool first = true;
            for (const auto& [n, op] : v.entries) {
              os << (first ? " " : ", ") << v.prefix << n << " = " << canonical_string(op);
              first = false;
            }
            os << (first ? "}" : " }");
          }
        },
        d.value);
    os << "\n";
  }
  for (const auto& r : s.directives) os << "run " << r << "\n";
  return os.str();
}

bool same_definitions(const SessionFile& a, const SessionFile& b) {
  if (a.dim != b.dim || a.definitions.size() != b.definitions.size() || a.directives != b.directives) return false;
  for (std::size_t i = 0; i < a.definitions.size(); ++i) {
    const auto& x = a.definitions[i];
    const auto& y = b.definitions[i];
    if (x.name != y.name || x.kind != y.kind || x.value.index() != y.value.index()) return false;
    const bool same = std::visit(
        [&](const auto& u) {
          using T = std::decay_t<decltype(u)>;
          const T& w = std::get<T>(y.value);
          if constexpr (std::is_same_v<T, StarDefinition>) {
            return u.moyal_bivector == w.moyal_bivector && u.star.coefficients() == w.star.coefficients();
          } else if constexpr (std::is_same_v<T, LieAlgebra>) {
            if (u.dim() != w.dim()) return false;
            for (int i = 0; i < u.dim(); ++i)
              for (int j = 0; j < u.dim(); ++j)
                for (int k = 0; k < u.dim(); ++k)
                  if (u.c(i, j, k) != w.c(i, j, k)) return false;
            return true;
          } else if constexpr (std::is_same_v<T, ActionDefinition>) {
            return u.algebra == w.algebra && u.action.images() == w.action.images();
          } else if constexpr (std::is_same_v<T, CochainDefinition>) {
            return u.algebra == w.algebra && u.cochain == w.cochain;
          } else if constexpr (std::is_same_v<T, SeriesDefinition>) {
            return u.prefix == w.prefix && u.entries == w.entries;
          } else {
            return u == w;
          }
        },
        x.value);
    if (!same) return false;
  }
  return true;
}

}  // namespace dq
