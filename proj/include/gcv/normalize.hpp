#pragma once

#include <stdexcept>
#include <utility>

#include "gcv/grammar.hpp"
#include "gcv/transform.hpp"

namespace gcv {

struct NormalizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NormalizationResult {
  Grammar normalized;
  Trace trace;  // replays the original into normalized, reversibly
  ANFClassification classification;
};

// Rewrites a grammar into abstract normal form: single root, no terminals,
// no labels/selectors/separator lists/inner choices, every nonterminal either
// undefined, defined by one rule over decorated nonterminal atoms, or defined
// by chain rules only. Deterministic; every rewrite is a recorded step.
//
// Fails (NormalizeError) when a root is undefined, when a secondary root is
// not reachable from the first, when the step budget is exceeded, or when a
// residual violation survives the pipeline (e.g. a root whose definition
// abstracts away to nothing).
NormalizationResult normalize(const Grammar& g);

// Grammar-specific rewrites applied before normalization during convergence:
// deyaccifies recursion-encoded repetition and collapses priority-layer
// chains (single chain rule, single referrer, on a reference cycle). Returns
// the grammar unchanged with an empty trace when no pattern applies.
std::pair<Grammar, Trace> mutateForConvergence(const Grammar& g);

}  // namespace gcv
