#include "derivations.hpp"

#include <map>

namespace gcv::testsupport {
namespace {

using Lang = std::set<Sentence>;

// all concatenations a+b that still fit the length bound
Lang concat(const Lang& a, const Lang& b, std::size_t maxLen) {
  Lang out;
  for (const auto& x : a)
    for (const auto& y : b) {
      if (x.size() + y.size() > maxLen) continue;
      Sentence s = x;
      s.insert(s.end(), y.begin(), y.end());
      out.insert(std::move(s));
    }
  return out;
}

Lang closure(const Lang& l, std::size_t maxLen) {
  Lang out = {Sentence{}};
  for (;;) {
    Lang next = concat(out, l, maxLen);
    std::size_t before = out.size();
    out.insert(next.begin(), next.end());
    if (out.size() == before) return out;
  }
}

struct Eval {
  const Grammar& g;
  std::size_t maxLen;
  std::map<std::string, Lang> lang;  // per defined nonterminal, grows only

  Lang expr(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Epsilon:
        return {Sentence{}};
      case ExprKind::Terminal:
        return {Sentence{"\"" + e.atom() + "\""}};
      case ExprKind::Nonterminal:
        if (g.defines(e.atom())) return lang[e.atom()];
        return {Sentence{e.atom()}};
      case ExprKind::Sequence: {
        Lang acc = {Sentence{}};
        for (const auto& c : e.children()) acc = concat(acc, expr(c), maxLen);
        return acc;
      }
      case ExprKind::Choice: {
        Lang acc;
        for (const auto& c : e.children()) {
          Lang l = expr(c);
          acc.insert(l.begin(), l.end());
        }
        return acc;
      }
      case ExprKind::Optional: {
        Lang acc = expr(e.children()[0]);
        acc.insert(Sentence{});
        return acc;
      }
      case ExprKind::Star:
        return closure(expr(e.children()[0]), maxLen);
      case ExprKind::Plus: {
        Lang l = expr(e.children()[0]);
        return concat(l, closure(l, maxLen), maxLen);
      }
      case ExprKind::SepListPlus:
      case ExprKind::SepListStar: {
        Lang el = expr(e.children()[0]);
        Lang sep = expr(e.children()[1]);
        Lang more = closure(concat(sep, el, maxLen), maxLen);
        Lang out = concat(el, more, maxLen);
        if (e.kind() == ExprKind::SepListStar) out.insert(Sentence{});
        return out;
      }
      case ExprKind::Selector:
        return expr(e.children()[0]);
    }
    return {};
  }
};

}  // namespace

std::set<Sentence> sentences(const Grammar& g, std::size_t maxLen) {
  Eval ev{g, maxLen, {}};
  // languages only ever grow and are bounded, so iterate to the fixpoint
  for (;;) {
    bool changed = false;
    for (const auto& p : g.productions()) {
      Lang l = ev.expr(p.rhs);
      auto& slot = ev.lang[p.lhs];
      for (auto& s : l) changed |= slot.insert(s).second;
    }
    if (!changed) break;
  }
  if (g.roots().empty()) return {};
  const std::string& root = g.roots().front();
  if (!g.defines(root)) return {Sentence{root}};
  return ev.lang[root];
}

}  // namespace gcv::testsupport
