#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "gcv/grammar.hpp"

namespace gcv {

struct SourceSpan {
  int line = 1;  // 1-based
  int col = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, SourceSpan where)
      : std::runtime_error(std::to_string(where.line) + ":" +
                           std::to_string(where.col) + ": " + message),
        span(where) {}

  SourceSpan span;
};

// GIN, the textual grammar notation.
//
//   # comment until end of line
//   root program
//   [lbl] lhs ::= rhs ;
//
// rhs operators from loosest to tightest: choice `|`, sequence
// (juxtaposition), selector `name::factor`, postfix `? * +`, atoms.
// Atoms are nonterminal identifiers, "terminal literals" (escapes: backslash
// before a quote or another backslash), eps, parenthesized groups, and lists
// `{ element separator }+` / `{ element separator }*`.
//
// parseGrammar throws ParseError (message prefixed line:col) on syntax
// errors, on a missing or duplicate root declaration, and on a declared root
// that occurs nowhere in the productions.
Grammar parseGrammar(std::string_view text);

// Canonical form: one `root` line per root, productions in order one per
// line, single spaces, minimal parentheses. parseGrammar(printGrammar(g))
// reproduces g exactly.
std::string printGrammar(const Grammar& g);

std::string printExpr(const Expr& e);

}  // namespace gcv
