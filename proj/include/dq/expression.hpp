#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dq/lie_algebra.hpp"

namespace dq {

enum class TokenKind { Number, Ident, Symbol, Arrow, Newline, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

/// Splits text into tokens; `#` starts a comment running to end of line.
std::vector<Token> tokenize(std::string_view text);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens);

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_symbol(std::string_view s) const;
  bool accept_symbol(std::string_view s);
  Token expect_symbol(std::string_view s);
  Token expect_ident();
  /// Skips newlines, used inside braces.
  void skip_newlines();
  std::size_t position() const noexcept { return pos_; }
  void reset(std::size_t pos) noexcept { pos_ = pos; }

  [[noreturn]] void fail(const Token& at, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// A parsed expression: function, polyvector field, or polydifferential operator.
using Value = CoefficientValue;

/// Parses one expression over x1..xn, d1..dn, d[i,j,...], slot groups (a|b|...).
/// Stops before `,`, `}`, `)`, `]`, newline, or end of input.
Value parse_value(TokenStream& ts, int dim);

/// Parses a whole string as one expression.
Value parse_expression(std::string_view text, int dim);

/// Conversions with a KindMismatch error naming the wanted kind.
Polynomial value_as_polynomial(const Value& v, int dim);
PolyVectorField value_as_polyvector(const Value& v, int dim);
/// Zero functions become zero operators of the given arity; a vector field becomes chi(X) when arity is 1.
PolyDiffOp value_as_operator(const Value& v, int dim, int arity);

/// Canonical text that parses back to the same value (order-0 slots written d[]).
std::string canonical_string(const Polynomial& p);
std::string canonical_string(const PolyVectorField& x);
std::string canonical_string(const PolyDiffOp& op);
std::string canonical_string(const Value& v);

}  // namespace dq
