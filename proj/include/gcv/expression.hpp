#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gcv {

// Right-hand-side expression trees. Values are immutable once built; all
// rewriting produces fresh trees. Construction canonicalizes:
//   - Sequence/Choice flatten directly nested nodes of the same kind,
//   - Sequence drops Epsilon children (eps is the unit of concatenation),
//   - Sequence/Choice of one child collapse to that child, of zero to Epsilon,
//   - Optional/Star/Plus of Epsilon collapse to Epsilon.
// This keeps every reachable tree in the shape the rest of the engine
// assumes, so no pass ever has to re-normalize defensively.
enum class ExprKind {
  Epsilon,
  Terminal,
  Nonterminal,
  Sequence,
  Choice,
  Optional,
  Star,
  Plus,
  SepListPlus,  // { element separator }+  children: [element, separator]
  SepListStar,  // { element separator }*
  Selector,     // name::expr, atom() holds the selector name
};

class Expr {
 public:
  Expr() = default;  // Epsilon

  static Expr epsilon();
  static Expr terminal(std::string literal);
  static Expr nonterminal(std::string name);
  static Expr sequence(std::vector<Expr> parts);
  static Expr choice(std::vector<Expr> alternatives);
  static Expr optional(Expr body);
  static Expr star(Expr body);
  static Expr plus(Expr body);
  static Expr sepListPlus(Expr element, Expr separator);
  static Expr sepListStar(Expr element, Expr separator);
  static Expr selector(std::string name, Expr body);

  ExprKind kind() const { return kind_; }
  // Terminal literal, nonterminal name, or selector name; empty otherwise.
  const std::string& atom() const { return atom_; }
  const std::vector<Expr>& children() const { return children_; }

  bool isNonterminal(const std::string& n) const {
    return kind_ == ExprKind::Nonterminal && atom_ == n;
  }

  bool operator==(const Expr& other) const;
  // Total structural order so productions and traces can be sorted
  // deterministically (kind, then atom, then children lexicographically).
  std::strong_ordering operator<=>(const Expr& other) const;

  std::size_t nodeCount() const;

 private:
  ExprKind kind_ = ExprKind::Epsilon;
  std::string atom_;
  std::vector<Expr> children_;
};

// Paths address subtrees as 0-based child index sequences; the empty path is
// the root of the rhs. For separator lists, 0 is the element and 1 the
// separator; unary wrappers and selectors have the body at 0.
using Path = std::vector<int>;

std::string pathToString(const Path& path);

// Subtree lookup; nullptr when the path does not resolve.
const Expr* exprAt(const Expr& root, const Path& path);

// Functional replacement; ancestors are rebuilt through the canonicalizing
// factories, so the result can collapse (e.g. a sequence losing its second
// child). Throws std::invalid_argument on a bad path.
Expr replaceAt(const Expr& root, const Path& path, const Expr& replacement);

// All paths (preorder) whose subtree satisfies pred.
template <typename Pred>
void collectPaths(const Expr& e, Pred&& pred, std::vector<Path>& out,
                  Path& scratch) {
  if (pred(static_cast<const Expr&>(e))) out.push_back(scratch);
  for (int i = 0; i < static_cast<int>(e.children().size()); ++i) {
    scratch.push_back(i);
    collectPaths(e.children()[static_cast<std::size_t>(i)], pred, out, scratch);
    scratch.pop_back();
  }
}

template <typename Pred>
std::vector<Path> findAll(const Expr& e, Pred&& pred) {
  std::vector<Path> out;
  Path scratch;
  collectPaths(e, pred, out, scratch);
  return out;
}

}  // namespace gcv
