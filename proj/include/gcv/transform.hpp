#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gcv/grammar.hpp"

namespace gcv {

class TransformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Transformation steps. Every step names its target through user-level
// arguments; the optional recorded fields hold whatever context backward
// application needs (original rhs, removed productions, positions). Steps
// emitted by the engine are always fully recorded; hand-written traces may
// omit the recorded parts, in which case forward application resolves
// targets leftmost-first and backward application either falls back to a
// verified guess (widen/narrow) or reports that the context is missing.
//
// Production indices (`index`) count within productionsOf(lhs), 1-based.
// Recorded positions are 0-based offsets into the whole production list.

struct RenameStep {
  std::string from, to;
  bool operator==(const RenameStep&) const = default;
};

struct UnlabelStep {
  std::string lhs;
  int index = 1;
  std::string label;
  bool operator==(const UnlabelStep&) const = default;
};

struct UnselectStep {
  std::string lhs;
  int index = 1;
  Path path;
  std::string name;
  std::optional<Expr> original;  // pre-image rhs
  bool operator==(const UnselectStep&) const = default;
};

struct AbstractRemoval {
  Path path;
  std::string literal;
  bool operator==(const AbstractRemoval&) const = default;
};

struct AbstractStep {
  std::string lhs;
  int index = 1;
  std::vector<AbstractRemoval> removals;
  std::optional<Expr> original;  // pre-image rhs
  bool operator==(const AbstractStep&) const = default;
};

struct DesugarSepStep {
  bool plusList = true;  // desugarSepPlus vs desugarSepStar
  std::string lhs;
  int index = 1;
  Path path;
  std::optional<Expr> separator;
  std::optional<Expr> original;  // pre-image rhs
  bool operator==(const DesugarSepStep&) const = default;
};

struct ExtractStep {
  std::string name;
  Expr body;
  std::vector<std::string> scope;
  bool operator==(const ExtractStep&) const = default;
};

struct InlineRestore {
  std::size_t index = 0;  // post-image production position
  Expr rhs;               // pre-image rhs of that production
  bool operator==(const InlineRestore&) const = default;
};

struct InlineStep {
  std::string name;
  bool recorded = false;
  std::size_t position = 0;  // pre-image position of the deleted production
  std::optional<std::string> label;
  Expr rhs;
  std::vector<InlineRestore> restores;
  bool operator==(const InlineStep&) const = default;
};

struct VerticalStep {
  std::string name;
  bool recorded = false;
  std::optional<std::string> label;  // label of the fused production
  bool operator==(const VerticalStep&) const = default;
};

struct WidenStep {
  bool widen = true;  // widen: + to *; narrow: * to +
  std::string name;
  int index = 1;
  std::optional<Path> path;
  bool operator==(const WidenStep&) const = default;
};

struct PermuteStep {
  std::string name;
  std::vector<int> order;  // 1-based source positions, new[i] = old[order[i]]
  bool operator==(const PermuteStep&) const = default;
};

struct DeyaccifyStep {
  std::string name;
  bool leftRecursive = true;
  bool recorded = false;
  std::size_t basePosition = 0, recPosition = 0;  // pre-image positions
  std::optional<std::string> baseLabel, recLabel;
  bool operator==(const DeyaccifyStep&) const = default;
};

struct RemovedProduction {
  std::size_t position = 0;
  std::optional<std::string> label;
  Expr rhs;
  bool operator==(const RemovedProduction&) const = default;
};

struct RemoveUnreachableStep {
  std::string name;
  bool recorded = false;
  std::vector<RemovedProduction> removed;
  bool operator==(const RemoveUnreachableStep&) const = default;
};

struct RerootStep {
  std::vector<std::string> newRoots;
  std::optional<std::vector<std::string>> oldRoots;
  bool operator==(const RerootStep&) const = default;
};

struct EpsOccurrence {
  std::size_t production = 0;  // pre-image position
  Path path;
  bool operator==(const EpsOccurrence&) const = default;
};

struct EliminateEpsilonStep {
  std::string name;
  bool recorded = false;
  std::size_t position = 0;  // pre-image position of the n ::= eps rule
  std::vector<EpsOccurrence> occurrences;
  bool operator==(const EliminateEpsilonStep&) const = default;
};

using Step =
    std::variant<RenameStep, UnlabelStep, UnselectStep, AbstractStep,
                 DesugarSepStep, ExtractStep, InlineStep, VerticalStep,
                 WidenStep, PermuteStep, DeyaccifyStep, RemoveUnreachableStep,
                 RerootStep, EliminateEpsilonStep>;

using Trace = std::vector<Step>;

// Operator name as it appears in trace files (widen/narrow and the two
// desugar variants are distinct names over a shared struct).
std::string opName(const Step& s);

// Applies one step. Throws TransformError when a precondition fails or the
// application would be a no-op.
Grammar applyForward(const Grammar& g, const Step& s);

// Inverse application. Uses the recorded context; the result is verified by
// re-running the step forward, so a grammar outside the step's image is
// always rejected.
Grammar applyBackward(const Grammar& g, const Step& s);

// Forward application that also returns the step with recorded context
// filled in. The engine emits traces through this.
std::pair<Grammar, Step> applyForwardRecording(const Grammar& g, const Step& s);

enum class Direction { Forward, Backward };

// Applies a whole trace (backward runs the steps reversed). Errors are
// wrapped with the 1-based index of the failing step.
Grammar applyTrace(const Grammar& g, const Trace& trace, Direction dir);

}  // namespace gcv
