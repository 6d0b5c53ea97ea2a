#pragma once

#include <string>
#include <string_view>

#include "gcv/gin.hpp"
#include "gcv/transform.hpp"

namespace gcv {

// Textual transformation scripts. One step per line:
//
//   opname(arg, arg, ...) ;
//
// with # comments between steps. Arguments are identifiers, integers,
// "literals", grammar expressions in angle brackets, bracketed lists
// ([1 0] for paths and orders, [a b] for name lists), and a dash for an
// absent label. Production indices in arguments are 1-based within the
// productions of the named nonterminal; recorded positions written by the
// engine are 0-based offsets into the whole production list.
//
// Each operator has a short form, which is what a person writes, and a full
// form carrying the context the engine records to make the step reversible:
//
//   rename(from, to)
//   unlabel(lhs, index, label)
//   unselect(lhs, index, [path], name [, <original rhs>])
//   abstract(lhs, index, [path] "lit" ... [, <original rhs>])
//   desugarSepPlus / desugarSepStar(lhs, index, [path] [, <sep>, <original>])
//   extract(name, <body>, [scope])
//   inline(name [, position, label, <rhs> {, restore-index, <restored rhs>}])
//   vertical(name [, label])
//   widen / narrow(name, index [, [path]])
//   permute(name, [order])
//   deyaccify(name, left|right [, basePos, recPos, baseLabel, recLabel])
//   removeUnreachable(name [{, position, label, <rhs>}])
//   reroot([roots] [, [previous roots]])
//   eliminateEpsilon(name [, position {, production, [path]}])
//
// printTrace emits exactly the fields a step carries, so parse and print are
// mutual inverses on both forms.
Trace parseTrace(std::string_view text);

std::string printStep(const Step& step);
std::string printTrace(const Trace& trace);

}  // namespace gcv
