#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "gcv/grammar.hpp"
#include "gcv/normalize.hpp"
#include "gcv/prodsig.hpp"
#include "gcv/transform.hpp"

namespace gcv {

struct StructError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Servant-side steps that align nominally matched rules with the reference:
// widen/narrow for repetition-kind differences and a final permute for
// reordered sequences. Both grammars must be in normal form and share their
// vocabulary (run after renaming). Any residual difference throws
// StructError naming the nonterminal and both rule sets.
Trace structuralResolve(const Grammar& masterAnf,
                        const Grammar& servantRenamed);

// Final convergence check: equal nonterminal sets, equal roots, and equal
// production multisets. Order-insensitive because chain groups are unordered
// alternatives at this level.
bool verifyConverged(const Grammar& masterAnf, const Grammar& servantFinal);

struct Verdict {
  bool converged = false;
  std::string reason;  // empty on success
};

struct ConvergenceResult {
  std::string servantName;

  Trace mutationTrace;     // servant-specific rewrites before normalization
  Trace servantAnfTrace;   // servant -> servant ANF
  Trace masterAnfTrace;    // reference -> reference ANF
  Trace renameTrace;       // servant names -> reference names
  Trace structuralTrace;   // widen/narrow/permute alignment

  NominalResolution resolution;  // partial when the match failed
  std::size_t alternatives = 0;  // other complete correspondences seen
  std::optional<std::pair<std::string, std::string>> frontier;

  Grammar masterAnf;
  Grammar servantFinal;  // furthest grammar reached on the servant side

  Verdict verdict;
};

// The full pipeline for one servant: mutate, normalize both sides, infer the
// vocabulary correspondence, rename, structurally align, verify. Match and
// alignment failures land in the verdict, never as exceptions; a reference
// grammar that cannot be normalized or an exhausted search budget does
// throw, since no servant could ever succeed against it.
ConvergenceResult converge(const Grammar& master, const Grammar& servant,
                           const std::string& servantName);

}  // namespace gcv
