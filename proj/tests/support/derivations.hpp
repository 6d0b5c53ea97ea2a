#pragma once

#include <set>
#include <string>
#include <vector>

#include "gcv/grammar.hpp"

namespace gcv::testsupport {

// A sentence is a sequence of leaf tokens: quoted terminal literals and
// undefined nonterminal names (which derivation treats as opaque tokens).
using Sentence = std::vector<std::string>;

// Every sentence of length <= maxLen derivable from the first root.
// Brute force by fixpoint iteration, so only meant for tiny grammars;
// the language-preservation checks cap maxLen at 4.
std::set<Sentence> sentences(const Grammar& g, std::size_t maxLen);

}  // namespace gcv::testsupport
