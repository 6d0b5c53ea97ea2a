#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gcv/expression.hpp"

namespace gcv {

struct Production {
  std::optional<std::string> label;  // [label] prefix, absent for most rules
  std::string lhs;
  Expr rhs;

  bool operator==(const Production& other) const = default;
  std::strong_ordering operator<=>(const Production& other) const;
};

// A grammar is the quadruple (nonterminals, terminals, roots, productions).
// The symbol sets are derived from the roots and the production list on
// construction: GIN has no separate declarations, so a nonterminal exists
// exactly when it is a root, defines a rule, or occurs in some rhs. Keeping
// the sets derived means transformations can never leave them stale.
class Grammar {
 public:
  Grammar() = default;
  Grammar(std::vector<std::string> roots, std::vector<Production> productions);

  const std::vector<std::string>& roots() const { return roots_; }
  const std::set<std::string>& nonterminals() const { return nonterminals_; }
  const std::set<std::string>& terminals() const { return terminals_; }
  const std::vector<Production>& productions() const { return productions_; }

  bool defines(const std::string& n) const;

 private:
  std::vector<std::string> roots_;
  std::vector<Production> productions_;
  std::set<std::string> nonterminals_;
  std::set<std::string> terminals_;
};

// Strict equality of all four components, production order included.
bool grammarIdentical(const Grammar& a, const Grammar& b);

// Same symbol sets and roots, production lists equal as multisets.
bool nominallyEquivalent(const Grammar& a, const Grammar& b);

// Productions with the given lhs, in grammar order. Throws
// std::invalid_argument naming n when it is not a nonterminal of g.
std::vector<Production> productionsOf(const Grammar& g, const std::string& n);

// Indices into g.productions() with the given lhs, in order.
std::vector<std::size_t> productionIndicesOf(const Grammar& g,
                                             const std::string& n);

// Least fixpoint of start under "lhs of a reached production mentions n in
// its rhs". Throws std::invalid_argument when start is not a subset of the
// grammar's nonterminals.
std::set<std::string> reachableFrom(const Grammar& g,
                                    const std::set<std::string>& start);

// Nonterminal names appearing in an expression (selector names excluded).
std::set<std::string> nonterminalsIn(const Expr& e);

// Abstract normal form classification. A grammar is in ANF when it has no
// terminals, exactly one root, and every defined nonterminal is either
//   - a chain group: every rule's rhs is a single undecorated nonterminal, or
//   - a structure rule: exactly one rule whose rhs is a nonempty sequence of
//     atoms, each a nonterminal optionally decorated with ?, * or +.
// Undefined nonterminals form the bottom set. A single undecorated chain is
// classified into the plus set, not the minus set.
struct ANFViolation {
  std::string nonterminal;  // empty for grammar-level violations
  std::string reason;

  bool operator==(const ANFViolation&) const = default;
};

struct ANFClassification {
  std::set<std::string> plusSet;    // defined by chain rules only
  std::set<std::string> minusSet;   // one sequence-of-atoms rule
  std::set<std::string> bottomSet;  // referenced or rooted but undefined
  std::vector<ANFViolation> violations;
};

ANFClassification classifyANF(const Grammar& g);

// True iff the rhs is a single undecorated nonterminal reference.
bool isChainRhs(const Expr& rhs);

// Decorated atom in the ANF sense: n, n?, n* or n+.
bool isDecoratedAtom(const Expr& e);

// True iff rhs is a nonempty sequence of decorated atoms (a single atom
// counts as a one-element sequence).
bool isAtomSequence(const Expr& rhs);

}  // namespace gcv
