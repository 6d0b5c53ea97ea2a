#pragma once

// Expression-level parsing shared between parseGrammar and parseTrace (the
// latter embeds GIN expressions in angle brackets). Internal.

#include "gcv/expression.hpp"
#include "lexer.hpp"

namespace gcv::detail {

// Parses at choice level, consuming as much as forms one expression.
Expr parseExpr(Lexer& lx);

}  // namespace gcv::detail
