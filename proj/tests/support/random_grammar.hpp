#pragma once

#include <map>
#include <random>
#include <string>

#include "gcv/grammar.hpp"

namespace gcv::testsupport {

// Knobs for the generator. The defaults match the property-suite profile:
// at most 15 defined nonterminals, rhs nesting depth at most 4.
struct GenOptions {
  int maxNonterminals = 15;
  int maxDepth = 4;
  int maxProductions = 3;  // per nonterminal
  int maxArity = 4;        // children of sequences and choices
};

// Produces a syntactically valid grammar with one declared root that is
// always defined. Every expression variant can occur in the output,
// including separator lists, selectors and epsilon. The root always keeps
// at least one production whose rhs is a bare defined nonterminal, so a
// slice of the graph survives reachability pruning and the normalizer has
// real work to do.
Grammar randomGrammar(std::mt19937& rng, const GenOptions& opt = {});

// Rewrites every nonterminal occurrence (definitions, references, roots)
// through the map; names absent from the map stay as they are. Used to
// manufacture known-equivalent grammar pairs.
Grammar renameAll(const Grammar& g, const std::map<std::string, std::string>& m);

// Reorders the production list with the given generator while keeping the
// relative order of rules sharing an lhs (matching keys on definition
// groups, not on rule order inside a group, is what the matcher promises).
Grammar shuffleDefinitions(const Grammar& g, std::mt19937& rng);

}  // namespace gcv::testsupport
