#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gcv/grammar.hpp"

namespace gcv {

// How often a nonterminal occurs in one rhs, and under which decoration.
enum class Marker { One, Opt, Plus, Star };

// Multiset over the four markers, stored as per-marker counts. Printed in
// the fixed order one < opt < plus < star, e.g. {one,one,star}.
struct Footprint {
  std::array<int, 4> counts{};

  bool empty() const { return counts == std::array<int, 4>{}; }
  std::size_t size() const;
  void add(Marker m) { ++counts[static_cast<std::size_t>(m)]; }
  int count(Marker m) const { return counts[static_cast<std::size_t>(m)]; }

  auto operator<=>(const Footprint&) const = default;
};

std::string footprintToString(const Footprint& f);

// The footprint of n in x: {one} for a bare occurrence, {opt}/{plus}/{star}
// for a decorated atomic occurrence, unions across sequence elements, looking
// through selectors. Choices, separator lists, and decorated compound bodies
// contribute nothing; occurrences inside them are deliberately invisible.
Footprint footprint(const std::string& n, const Expr& x);

// Repetition kinds are interchangeable for matching purposes: + blurs to *.
Footprint plusToStar(Footprint f);
bool footprintEquiv(const Footprint& a, const Footprint& b);

// Signature of one production: every rhs nonterminal with a nonempty
// footprint. The lhs does not take part.
using ProdSig = std::map<std::string, Footprint>;

ProdSig prodsig(const Production& p);
// {E:{one}, S:{one,star}} with entries sorted by name.
std::string prodsigToString(const ProdSig& sig);

// Signatures are equivalent when their footprints can be paired bijectively
// modulo footprintEquiv. Since footprint equivalence just blurs + into *,
// this reduces to multiset equality of the blurred footprints.
bool prodsigEquiv(const Production& p, const Production& q);

// A correspondence between two nonterminal vocabularies. The left side is
// the grammar being transformed (the servant in convergence runs), the right
// side the reference. An absent name is the unmatched marker and is printed
// as '-'; pairs of two absent names never occur.
struct ResolutionPair {
  std::optional<std::string> left;
  std::optional<std::string> right;

  bool operator==(const ResolutionPair&) const = default;
};

bool resolutionPairLess(const ResolutionPair& a, const ResolutionPair& b);

struct NominalResolution {
  std::vector<ResolutionPair> pairs;  // sorted by left then right, unique

  bool operator==(const NominalResolution&) const = default;
};

std::string resolutionToString(const NominalResolution& r);

// All ways to resolve the vocabularies of two single productions against
// each other: every footprint-respecting bijection between the signatures,
// augmented with the (p.lhs, q.lhs) pair, kept only if the whole pair set is
// functional in both directions. Ordered by the bijection enumeration,
// which walks p's entries sorted by name and q's candidates in name order.
// Requires prodsigEquiv(p, q); throws MatchError otherwise.
std::vector<NominalResolution> productionResolutions(const Production& p,
                                                     const Production& q);

// Raised for misuse (non-equivalent productions, non-ANF input) and for a
// blown search budget; distinct from an honest MatchFailure result.
struct MatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalMatch {
  NominalResolution resolution;  // first hit in deterministic search order
  std::size_t alternatives = 0;  // distinct complete resolutions beyond it
};

struct MatchFailure {
  NominalResolution partial;  // deepest consistent partial correspondence
  // the (servant, master) pair whose production rules could not be matched
  std::optional<std::pair<std::string, std::string>> frontier;
  std::string reason;
};

using MatchResult = std::variant<GlobalMatch, MatchFailure>;

// Infers the correspondence between the vocabularies of two normal-form
// grammars. Seeds with the root pair, then matches the production rules of
// every resolved pair: single structure rules via productionResolutions,
// chain groups via bijections between the referenced nonterminal sets
// (explored in lexicographic order of the servant-side targets), undefined
// nonterminals vacuously. Backtracks on dead ends; the first complete
// consistent correspondence wins. Throws MatchError when either grammar is
// not in normal form or the search exceeds its node budget.
MatchResult globalResolution(const Grammar& master, const Grammar& servant);

}  // namespace gcv
