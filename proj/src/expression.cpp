#include "gcv/expression.hpp"

#include <stdexcept>
#include <utility>

namespace gcv {

Expr Expr::epsilon() { return Expr{}; }

Expr Expr::terminal(std::string literal) {
  Expr e;
  e.kind_ = ExprKind::Terminal;
  e.atom_ = std::move(literal);
  return e;
}

Expr Expr::nonterminal(std::string name) {
  Expr e;
  e.kind_ = ExprKind::Nonterminal;
  e.atom_ = std::move(name);
  return e;
}

Expr Expr::sequence(std::vector<Expr> parts) {
  std::vector<Expr> flat;
  flat.reserve(parts.size());
  for (auto& p : parts) {
    if (p.kind_ == ExprKind::Epsilon) continue;
    if (p.kind_ == ExprKind::Sequence) {
      for (auto& c : p.children_) flat.push_back(std::move(c));
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return epsilon();
  if (flat.size() == 1) return std::move(flat.front());
  Expr e;
  e.kind_ = ExprKind::Sequence;
  e.children_ = std::move(flat);
  return e;
}

Expr Expr::choice(std::vector<Expr> alternatives) {
  std::vector<Expr> flat;
  flat.reserve(alternatives.size());
  for (auto& a : alternatives) {
    if (a.kind_ == ExprKind::Choice) {
      for (auto& c : a.children_) flat.push_back(std::move(c));
    } else {
      flat.push_back(std::move(a));
    }
  }
  if (flat.empty()) return epsilon();
  if (flat.size() == 1) return std::move(flat.front());
  Expr e;
  e.kind_ = ExprKind::Choice;
  e.children_ = std::move(flat);
  return e;
}

// Repetition or option over nothing is nothing; otherwise a plain wrapper.
Expr Expr::optional(Expr body) {
  if (body.kind_ == ExprKind::Epsilon) return epsilon();
  Expr e;
  e.kind_ = ExprKind::Optional;
  e.children_.push_back(std::move(body));
  return e;
}

Expr Expr::star(Expr body) {
  if (body.kind_ == ExprKind::Epsilon) return epsilon();
  Expr e;
  e.kind_ = ExprKind::Star;
  e.children_.push_back(std::move(body));
  return e;
}

Expr Expr::plus(Expr body) {
  if (body.kind_ == ExprKind::Epsilon) return epsilon();
  Expr e;
  e.kind_ = ExprKind::Plus;
  e.children_.push_back(std::move(body));
  return e;
}

Expr Expr::sepListPlus(Expr element, Expr separator) {
  Expr e;
  e.kind_ = ExprKind::SepListPlus;
  e.children_.push_back(std::move(element));
  e.children_.push_back(std::move(separator));
  return e;
}

Expr Expr::sepListStar(Expr element, Expr separator) {
  Expr e;
  e.kind_ = ExprKind::SepListStar;
  e.children_.push_back(std::move(element));
  e.children_.push_back(std::move(separator));
  return e;
}

Expr Expr::selector(std::string name, Expr body) {
  Expr e;
  e.kind_ = ExprKind::Selector;
  e.atom_ = std::move(name);
  e.children_.push_back(std::move(body));
  return e;
}

bool Expr::operator==(const Expr& other) const {
  return kind_ == other.kind_ && atom_ == other.atom_ &&
         children_ == other.children_;
}

std::strong_ordering Expr::operator<=>(const Expr& other) const {
  if (auto c = kind_ <=> other.kind_; c != 0) return c;
  if (auto c = atom_ <=> other.atom_; c != 0) return c;
  return children_ <=> other.children_;
}

std::size_t Expr::nodeCount() const {
  std::size_t n = 1;
  for (const auto& c : children_) n += c.nodeCount();
  return n;
}

std::string pathToString(const Path& path) {
  std::string s = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(path[i]);
  }
  s += ']';
  return s;
}

const Expr* exprAt(const Expr& root, const Path& path) {
  const Expr* cur = &root;
  for (int idx : path) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= cur->children().size())
      return nullptr;
    cur = &cur->children()[static_cast<std::size_t>(idx)];
  }
  return cur;
}

Expr replaceAt(const Expr& root, const Path& path, const Expr& replacement) {
  if (path.empty()) return replacement;
  int idx = path.front();
  if (idx < 0 || static_cast<std::size_t>(idx) >= root.children().size())
    throw std::invalid_argument("replaceAt: path does not resolve at " +
                                pathToString(path));
  Path rest(path.begin() + 1, path.end());
  std::vector<Expr> kids = root.children();
  kids[static_cast<std::size_t>(idx)] =
      replaceAt(kids[static_cast<std::size_t>(idx)], rest, replacement);
  switch (root.kind()) {
    case ExprKind::Sequence:
      return Expr::sequence(std::move(kids));
    case ExprKind::Choice:
      return Expr::choice(std::move(kids));
    case ExprKind::Optional:
      return Expr::optional(std::move(kids.front()));
    case ExprKind::Star:
      return Expr::star(std::move(kids.front()));
    case ExprKind::Plus:
      return Expr::plus(std::move(kids.front()));
    case ExprKind::SepListPlus:
      return Expr::sepListPlus(std::move(kids[0]), std::move(kids[1]));
    case ExprKind::SepListStar:
      return Expr::sepListStar(std::move(kids[0]), std::move(kids[1]));
    case ExprKind::Selector:
      return Expr::selector(root.atom(), std::move(kids.front()));
    default:
      throw std::invalid_argument("replaceAt: leaf node has no children");
  }
}

}  // namespace gcv
