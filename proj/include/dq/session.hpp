#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dq/expression.hpp"
#include "dq/lie_algebra.hpp"
#include "dq/star_product.hpp"

namespace dq {

struct StarDefinition {
  StarProduct star;
  /// Set when defined as moyal(pi, order=N); kept for the canonical text.
  std::optional<std::string> moyal_bivector;
};

struct ActionDefinition {
  std::string algebra;
  Action action;
};

struct CochainDefinition {
  std::string algebra;
  CECochain cochain;
};

/// Order-indexed unary operators: entries[n] is the h^n term.
struct SeriesDefinition {
  std::map<int, PolyDiffOp> entries;
  /// Entry names are prefix + order, e.g. T1, T2.
  std::string prefix;

  int max_order() const { return entries.empty() ? -1 : entries.rbegin()->first; }
  /// Terms for orders from..to, zero where absent.
  std::vector<PolyDiffOp> dense(int dim, int from, int to) const;
};

using DefinitionValue = std::variant<Polynomial, PolyVectorField, PolyDiffOp, StarDefinition, LieAlgebra,
                                     ActionDefinition, CochainDefinition, SeriesDefinition>;

enum class DefinitionKind { Poly, Mvf, Op, Star, Lie, Action, Cochain, Series };
std::string_view to_string(DefinitionKind kind);

struct Definition {
  std::string name;
  DefinitionKind kind = DefinitionKind::Poly;
  DefinitionValue value;
  int line = 0;
};

struct SessionFile {
  int dim = 0;
  std::vector<Definition> definitions;
  /// Command lines from `run` directives, verbatim.
  std::vector<std::string> directives;

  const Definition* find(const std::string& name) const;
  /// Throws ResolveError when the name is missing or of another kind.
  const Definition& require(const std::string& name, DefinitionKind kind) const;
};

/// Line-oriented grammar:
///   dim 2
///   poly f = 3/2*x1^2*x2 - x2
///   mvf pi = x2*(d1^d2)
///   op B2 = 1/8*(d[1,1]|d[2,2]) - 1/8*(d[1,2]|d[1,2])
///   lie g = { [e1,e2] = e2 }            (lie g(3) = {} for an explicit dimension)
///   action phi0 = { e1 -> x1*d1 - x2*d2, e2 -> d2 }   (action phi0 : g = ... to name the algebra)
///   star S = moyal(pi, order=4)  |  star S = { B1 = ..., B2 = ... }
///   series T = { T1 = ..., T2 = ... }
///   cochain c = { [e1,e2] -> x1*d1 }   (cochain poly|mvf|op c : g = ... to fix kind / algebra)
///   run verify-mc S --order 4
/// Errors are ParseError with line and column; unresolved names carry the ResolveError code.
SessionFile parse_session(std::string_view text);

/// Canonical text; parse_session(serialize_session(s)) reproduces s.
std::string serialize_session(const SessionFile& s);

bool same_definitions(const SessionFile& a, const SessionFile& b);

/// Default truncation: DQ_DEFAULT_ORDER when set, else `fallback`. Values outside 0..64 are a UsageError.
int default_order(int fallback);

}  // namespace dq
