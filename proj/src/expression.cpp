#include "dq/expression.hpp"

#include <cctype>

#include "dq/errors.hpp"

namespace dq {

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '\n') {
      out.push_back({TokenKind::Newline, "\\n", line, col});
      advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t{TokenKind::Symbol, "", line, col};
    std::size_t n = 1;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i + n < text.size() && std::isdigit(static_cast<unsigned char>(text[i + n]))) ++n;
      t.kind = TokenKind::Number;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i + n < text.size() && (std::isalnum(static_cast<unsigned char>(text[i + n])) || text[i + n] == '_')) ++n;
      t.kind = TokenKind::Ident;
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      n = 2;
      t.kind = TokenKind::Arrow;
    } else if (std::string_view("+-*/^()[]{},|=:;").find(c) == std::string_view::npos) {
      throw ParseError(line, col, std::string(1, c), "unexpected character");
    }
    t.text = std::string(text.substr(i, n));
    out.push_back(std::move(t));
    advance(n);
  }
  out.push_back({TokenKind::End, "", line, col});
  return out;
}

TokenStream::TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.back().kind != TokenKind::End) tokens_.push_back({TokenKind::End, "", 1, 1});
}

const Token& TokenStream::peek(std::size_t ahead) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }

Token TokenStream::next() {
  Token t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::at_symbol(std::string_view s) const {
  const Token& t = peek();
  return (t.kind == TokenKind::Symbol || t.kind == TokenKind::Arrow) && t.text == s;
}

bool TokenStream::accept_symbol(std::string_view s) {
  if (!at_symbol(s)) return false;
  next();
  return true;
}

Token TokenStream::expect_symbol(std::string_view s) {
  if (!at_symbol(s)) fail(peek(), "expected '" + std::string(s) + "'");
  return next();
}

Token TokenStream::expect_ident() {
  if (peek().kind != TokenKind::Ident) fail(peek(), "expected a name");
  return next();
}

void TokenStream::skip_newlines() {
  while (peek().kind == TokenKind::Newline) next();
}

void TokenStream::fail(const Token& at, const std::string& message) const {
  std::string tok = at.kind == TokenKind::End ? "end of input" : at.text;
  throw ParseError(at.line, at.column, tok, message);
}

namespace {

const char* kind_name(const Value& v) {
  switch (v.index()) {
    case 0: return "function";
    case 1: return "polyvector field";
    default: return "operator";
  }
}

// Index suffix of x3 / d3 / e3, or -1.
int suffix_index(const std::string& s, char head) {
  if (s.size() < 2 || s[0] != head) return -1;
  for (std::size_t k = 1; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return -1;
  if (s[1] == '0' || s.size() > 4) return -1;
  return std::stoi(s.substr(1));
}

PolyDiffOp scale_op(const PolyDiffOp& op, const Polynomial& p) {
  PolyDiffOp out(op.dim(), op.arity());
  for (const auto& [slots, c] : op.terms()) out.add_term(slots, c * p);
  return out;
}

class Parser {
 public:
  Parser(TokenStream& ts, int dim) : ts_(ts), dim_(dim) {}

  Value expression() {
    bool negate = false;
    if (ts_.accept_symbol("-")) {
      negate = true;
    } else {
      ts_.accept_symbol("+");
    }
    Value acc = term();
    if (negate) acc = scaled(acc, Rational(-1));
    while (ts_.at_symbol("+") || ts_.at_symbol("-")) {
      const Token op = ts_.next();
      Value rhs = term();
      if (op.text == "-") rhs = scaled(rhs, Rational(-1));
      acc = add(acc, rhs, op);
    }
    return acc;
  }

 private:
  Value term() {
    Value acc = factor();
    while (ts_.at_symbol("*") || ts_.at_symbol("/")) {
      const Token op = ts_.next();
      Value rhs = factor();
      if (op.text == "*") {
        acc = multiply(acc, rhs, op);
      } else {
        const auto* p = std::get_if<Polynomial>(&rhs);
        if (!p || p->degree() > 0) ts_.fail(op, "divisor must be a number");
        if (p->is_zero()) ts_.fail(op, "division by zero");
        acc = scaled(acc, 1 / p->coefficient(MultiIndex(dim_)));
      }
    }
    return acc;
  }

  Value factor() {
    Value base = primary();
    while (ts_.at_symbol("^")) {
      const Token op = ts_.next();
      if (ts_.peek().kind == TokenKind::Number) {
        const Token n = ts_.next();
        auto* p = std::get_if<Polynomial>(&base);
        if (!p) ts_.fail(op, "powers apply to functions only; use ^ between fields for wedge");
        if (n.text.size() > 3) ts_.fail(n, "exponent too large");
        const int e = std::stoi(n.text);
        Polynomial r = Polynomial::constant(dim_, 1);
        for (int k = 0; k < e; ++k) r *= *p;
        base = r;
      } else {
        Value rhs = primary();
        base = wedge_values(base, rhs, op);
      }
    }
    return base;
  }

  Value primary() {
    const Token t = ts_.peek();
    if (t.kind == TokenKind::Number) {
      ts_.next();
      return Polynomial::constant(dim_, Rational(t.text));
    }
    if (t.kind == TokenKind::Ident) {
      if (t.text == "d" && ts_.peek(1).kind == TokenKind::Symbol && ts_.peek(1).text == "[") {
        PolyDiffOp op(dim_, 1);
        op.add_term({multi_derivative()}, Polynomial::constant(dim_, 1));
        return op;
      }
      ts_.next();
      if (int i = suffix_index(t.text, 'x'); i > 0) {
        if (i > dim_) ts_.fail(t, "variable outside dimension " + std::to_string(dim_));
        return Polynomial::variable(dim_, i - 1);
      }
      if (int i = suffix_index(t.text, 'd'); i > 0) {
        if (i > dim_) ts_.fail(t, "derivative outside dimension " + std::to_string(dim_));
        return PolyVectorField::basis(dim_, i - 1);
      }
      ts_.fail(t, "unknown symbol");
    }
    if (ts_.at_symbol("(")) {
      const Token open = ts_.next();
      if (auto op = try_slot_group()) return *op;
      Value v = expression();
      if (!ts_.accept_symbol(")")) ts_.fail(ts_.peek(), "expected ')' to close '(' at " + std::to_string(open.line) + ":" +
                                                            std::to_string(open.column));
      return v;
    }
    ts_.fail(t, "expected an expression");
  }

  // d[i,j,...] -> exponent vector; d[] is the order-0 slot.
  MultiIndex multi_derivative() {
    ts_.next();
    ts_.expect_symbol("[");
    MultiIndex m(dim_);
    if (ts_.accept_symbol("]")) return m;
    do {
      const Token n = ts_.peek();
      if (n.kind != TokenKind::Number) ts_.fail(n, "expected an axis number");
      ts_.next();
      const int axis = n.text.size() > 2 ? 0 : std::stoi(n.text);
      if (axis < 1 || axis > dim_) ts_.fail(n, "axis outside dimension " + std::to_string(dim_));
      m.set(axis - 1, m[axis - 1] + 1);
    } while (ts_.accept_symbol(","));
    ts_.expect_symbol("]");
    return m;
  }

  // After '(': slot ('|' slot)* ')' with slot = d[...] or 1. Restores the stream when it does not match.
  std::optional<PolyDiffOp> try_slot_group() {
    const std::size_t start = ts_.position();
    PolyDiffOp::Slots slots;
    bool any_derivative = false;
    while (true) {
      const Token t = ts_.peek();
      if (t.kind == TokenKind::Ident && t.text == "d" && ts_.peek(1).text == "[") {
        slots.push_back(multi_derivative());
        any_derivative = true;
      } else if (t.kind == TokenKind::Number && t.text == "1") {
        ts_.next();
        slots.push_back(MultiIndex(dim_));
      } else {
        break;
      }
      if (ts_.accept_symbol("|")) continue;
      if (ts_.at_symbol(")") && (slots.size() > 1 || any_derivative)) {
        ts_.next();
        PolyDiffOp op(dim_, static_cast<int>(slots.size()));
        op.add_term(slots, Polynomial::constant(dim_, 1));
        return op;
      }
      break;
    }
    if (!slots.empty() && ts_.position() > start && slots.size() > 1 && !ts_.at_symbol(")")) {
      // A bar was consumed, so this can only be a slot group.
      ts_.fail(ts_.peek(), "expected a slot d[...] or 1");
    }
    ts_.reset(start);
    return std::nullopt;
  }

  Value scaled(const Value& v, const Rational& r) {
    return std::visit([&](auto x) -> Value { return x *= r; }, v);
  }

  Value add(const Value& a, const Value& b, const Token& op) {
    if (a.index() == b.index()) {
      try {
        return std::visit(
            [&](const auto& x) -> Value {
              using T = std::decay_t<decltype(x)>;
              const T& y = std::get<T>(b);
              if (x.is_zero()) return y;
              if (y.is_zero()) return x;
              return x + y;
            },
            a);
      } catch (const Error& e) {
        ts_.fail(op, e.what());
      }
    }
    if (is_zero_value(a)) return b;
    if (is_zero_value(b)) return a;
    if (a.index() == 0 || b.index() == 0) {
      const Polynomial& p = a.index() == 0 ? std::get<Polynomial>(a) : std::get<Polynomial>(b);
      const Value& other = a.index() == 0 ? b : a;
      if (auto* x = std::get_if<PolyVectorField>(&other); x && x->grade() == 0) return PolyVectorField::function(p) + *x;
      if (auto* o = std::get_if<PolyDiffOp>(&other); o && o->arity() == 0) return PolyDiffOp::function(p) + *o;
    }
    ts_.fail(op, std::string("cannot add a ") + kind_name(a) + " and a " + kind_name(b));
  }

  Value multiply(const Value& a, const Value& b, const Token& op) {
    if (auto* p = std::get_if<Polynomial>(&a)) {
      if (auto* q = std::get_if<Polynomial>(&b)) return *p * *q;
      if (auto* x = std::get_if<PolyVectorField>(&b)) return PolyVectorField(*x) *= *p;
      return scale_op(std::get<PolyDiffOp>(b), *p);
    }
    if (b.index() == 0) return multiply(b, a, op);
    if (a.index() == 1 && b.index() == 1) ts_.fail(op, "use ^ to wedge polyvector fields");
    ts_.fail(op, std::string("cannot multiply a ") + kind_name(a) + " by a " + kind_name(b));
  }

  Value wedge_values(const Value& a, const Value& b, const Token& op) {
    if (a.index() == 2 || b.index() == 2) ts_.fail(op, "wedge needs polyvector fields");
    auto as_field = [](const Value& v) {
      if (auto* p = std::get_if<Polynomial>(&v)) return PolyVectorField::function(*p);
      return std::get<PolyVectorField>(v);
    };
    return wedge(as_field(a), as_field(b));
  }

  TokenStream& ts_;
  int dim_;
};

bool at_expression_end(const TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind == TokenKind::End || t.kind == TokenKind::Newline) return true;
  return t.kind == TokenKind::Symbol && (t.text == "," || t.text == "}" || t.text == ")" || t.text == "]" || t.text == ";");
}

}  // namespace

Value parse_value(TokenStream& ts, int dim) {
  if (dim < 1 || dim > kMaxDim) throw Error(ErrorCode::DimensionMismatch, "dimension must lie in 1.." + std::to_string(kMaxDim));
  Parser p(ts, dim);
  Value v = p.expression();
  if (!at_expression_end(ts)) ts.fail(ts.peek(), "unexpected token after expression");
  return v;
}

Value parse_expression(std::string_view text, int dim) {
  TokenStream ts(tokenize(text));
  Value v = parse_value(ts, dim);
  if (ts.peek().kind != TokenKind::End) ts.fail(ts.peek(), "unexpected token after expression");
  return v;
}

Polynomial value_as_polynomial(const Value& v, int dim) {
  if (auto* p = std::get_if<Polynomial>(&v)) return *p;
  if (auto* x = std::get_if<PolyVectorField>(&v); x && x->grade() == 0) return x->component(IndexMask{0});
  if (is_zero_value(v)) return Polynomial(dim);
  throw Error(ErrorCode::KindMismatch, std::string("expected a function, got a ") + kind_name(v));
}

PolyVectorField value_as_polyvector(const Value& v, int dim) {
  if (auto* x = std::get_if<PolyVectorField>(&v)) return *x;
  if (auto* p = std::get_if<Polynomial>(&v)) return PolyVectorField::function(*p);
  if (is_zero_value(v)) return PolyVectorField(dim, 0);
  throw Error(ErrorCode::KindMismatch, "expected a polyvector field, got an operator");
}

PolyDiffOp value_as_operator(const Value& v, int dim, int arity) {
  if (auto* o = std::get_if<PolyDiffOp>(&v)) {
    if (o->arity() != arity && !o->is_zero())
      throw Error(ErrorCode::ArityMismatch, "expected an operator of arity " + std::to_string(arity) + ", got arity " +
                                                std::to_string(o->arity()));
    return o->is_zero() ? PolyDiffOp(dim, arity) : *o;
  }
  if (is_zero_value(v)) return PolyDiffOp(dim, arity);
  if (auto* p = std::get_if<Polynomial>(&v); p && arity == 0) return PolyDiffOp::function(*p);
  if (auto* x = std::get_if<PolyVectorField>(&v); x && x->grade() == arity && arity >= 1) return as_cochain(*x);
  throw Error(ErrorCode::KindMismatch, std::string("expected an operator of arity ") + std::to_string(arity) + ", got a " +
                                           kind_name(v));
}

std::string canonical_string(const Polynomial& p) { return p.to_string(); }

std::string canonical_string(const PolyVectorField& x) {
  auto basis = [](IndexMask m) {
    std::string s;
    for (int i : mask_indices(m)) s += (s.empty() ? "d" : "^d") + std::to_string(i + 1);
    return s;
  };
  if (x.is_zero()) {
    if (x.grade() == 0) return "0";
    std::vector<int> first(static_cast<std::size_t>(x.grade()));
    for (int i = 0; i < x.grade(); ++i) first[static_cast<std::size_t>(i)] = i;
    return "0*(" + basis(indices_mask(first)) + ")";
  }
  std::string out;
  for (const auto& [m, p] : x.components()) {
    if (!out.empty()) out += " + ";
    out += "(" + p.to_string() + ")";
    if (m != 0) out += "*(" + basis(m) + ")";
  }
  return out;
}

std::string canonical_string(const PolyDiffOp& op) {
  auto slot = [](const MultiIndex& s) {
    std::string out = "d[";
    bool first = true;
    for (int i = 0; i < s.size(); ++i)
      for (int k = 0; k < s[i]; ++k) {
        out += (first ? "" : ",") + std::to_string(i + 1);
        first = false;
      }
    return out + "]";
  };
  auto slots_string = [&](const PolyDiffOp::Slots& slots) {
    std::string out = "(";
    for (std::size_t j = 0; j < slots.size(); ++j) out += (j ? "|" : "") + slot(slots[j]);
    return out + ")";
  };
  if (op.is_zero()) {
    if (op.arity() == 0) return "0";
    return "0*" + slots_string(PolyDiffOp::Slots(static_cast<std::size_t>(op.arity()), MultiIndex(op.dim())));
  }
  std::string out;
  for (const auto& [slots, c] : op.terms()) {
    if (!out.empty()) out += " + ";
    out += "(" + c.to_string() + ")";
    if (!slots.empty()) out += "*" + slots_string(slots);
  }
  return out;
}

std::string canonical_string(const Value& v) {
  return std::visit([](const auto& x) { return canonical_string(x); }, v);
}

}  // namespace dq
