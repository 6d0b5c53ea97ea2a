#include "gcv/normalize.hpp"

#include <algorithm>
#include <set>

namespace gcv {

namespace {

// 1-based position of the production among those sharing its lhs.
int indexWithinLhs(const Grammar& g, std::size_t global) {
  const std::string& lhs = g.productions()[global].lhs;
  int index = 0;
  for (std::size_t i = 0; i <= global; ++i)
    if (g.productions()[i].lhs == lhs) ++index;
  return index;
}

std::string freshName(const Grammar& g, const std::string& base) {
  for (int k = 1;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (!g.nonterminals().count(candidate)) return candidate;
  }
}

// Innermost (postorder-first) node satisfying pred; skipRoot ignores the
// whole-rhs position.
std::optional<Path> findInnermost(const Expr& e,
                                  bool (*pred)(const Expr&),
                                  bool skipRoot, Path& scratch) {
  for (int i = 0; i < static_cast<int>(e.children().size()); ++i) {
    scratch.push_back(i);
    auto hit = findInnermost(e.children()[static_cast<std::size_t>(i)], pred,
                             false, scratch);
    scratch.pop_back();
    if (hit) return hit;
  }
  if (!skipRoot && pred(e)) return scratch;
  return std::nullopt;
}

std::optional<Path> findInnermost(const Expr& e, bool (*pred)(const Expr&),
                                  bool skipRoot = false) {
  Path scratch;
  return findInnermost(e, pred, skipRoot, scratch);
}

bool isSepList(const Expr& e) {
  return e.kind() == ExprKind::SepListPlus || e.kind() == ExprKind::SepListStar;
}

bool isChoice(const Expr& e) { return e.kind() == ExprKind::Choice; }

bool isDecoration(const Expr& e) {
  return e.kind() == ExprKind::Optional || e.kind() == ExprKind::Star ||
         e.kind() == ExprKind::Plus;
}

bool isCompoundDecoration(const Expr& e) {
  return isDecoration(e) &&
         e.children().front().kind() != ExprKind::Nonterminal;
}

// The lhs names in first-production order, each once.
std::vector<std::string> definitionOrder(const Grammar& g) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& p : g.productions())
    if (seen.insert(p.lhs).second) order.push_back(p.lhs);
  return order;
}

struct Pipeline {
  Grammar g;
  Trace trace;
  std::size_t budget;

  void apply(const Step& s) {
    auto [next, recorded] = applyForwardRecording(g, s);
    g = std::move(next);
    trace.push_back(std::move(recorded));
    if (trace.size() > budget)
      throw NormalizeError(
          "normalization exceeded its step budget; the pipeline does not "
          "converge on this input");
  }

  // Each stage drains its own concern and reports whether it fired at all.

  bool labelsAndSelectors() {
    bool fired = false;
    for (bool again = true; again;) {
      again = false;
      for (std::size_t i = 0; i < g.productions().size(); ++i) {
        const Production& p = g.productions()[i];
        if (!p.label) continue;
        apply(UnlabelStep{p.lhs, indexWithinLhs(g, i), *p.label});
        fired = again = true;
        break;
      }
      if (again) continue;
      for (std::size_t i = 0; i < g.productions().size(); ++i) {
        const Production& p = g.productions()[i];
        auto hits = findAll(
            p.rhs, [](const Expr& e) { return e.kind() == ExprKind::Selector; });
        if (hits.empty()) continue;
        const Expr* node = exprAt(p.rhs, hits.front());
        apply(UnselectStep{p.lhs, indexWithinLhs(g, i), hits.front(),
                           node->atom(), std::nullopt});
        fired = again = true;
        break;
      }
    }
    return fired;
  }

  bool separatorLists() {
    bool fired = false;
    for (bool again = true; again;) {
      again = false;
      for (std::size_t i = 0; i < g.productions().size(); ++i) {
        const Production& p = g.productions()[i];
        auto hit = findInnermost(p.rhs, isSepList);
        if (!hit) continue;
        bool plusList = exprAt(p.rhs, *hit)->kind() == ExprKind::SepListPlus;
        apply(DesugarSepStep{plusList, p.lhs, indexWithinLhs(g, i), *hit,
                             std::nullopt, std::nullopt});
        fired = again = true;
        break;
      }
    }
    return fired;
  }

  bool terminals() {
    bool fired = false;
    for (bool again = true; again;) {
      again = false;
      for (std::size_t i = 0; i < g.productions().size(); ++i) {
        const Production& p = g.productions()[i];
        auto hits = findAll(
            p.rhs, [](const Expr& e) { return e.kind() == ExprKind::Terminal; });
        if (hits.empty()) continue;
        AbstractStep step{p.lhs, indexWithinLhs(g, i), {}, std::nullopt};
        for (auto& path : hits) {
          const Expr* node = exprAt(p.rhs, path);
          step.removals.push_back({std::move(path), node->atom()});
        }
        apply(std::move(step));
        fired = again = true;
        break;
      }
    }
    return fired;
  }

  bool epsilonRules() {
    bool fired = false;
    for (bool again = true; again;) {
      again = false;
      for (std::size_t i = 0; i < g.productions().size(); ++i) {
        const Production& p = g.productions()[i];
        if (p.rhs.kind() != ExprKind::Epsilon) continue;
        // A root defined by nothing but eps stays; classification reports it.
        if (p.lhs == g.roots().front() &&
            productionIndicesOf(g, p.lhs).size() == 1)
          continue;
        apply(EliminateEpsilonStep{p.lhs, false, 0, {}});
        fired = again = true;
        break;
      }
    }
    return fired;
  }

  bool innerChoices() {
    bool fired = false;
    for (bool again = true; again;) {
      again = false;
      for (std::size_t i = 0; i < g.productions().size(); ++i) {
        const Production& p = g.productions()[i];
        auto hit = findInnermost(p.rhs, isChoice, /*skipRoot=*/true);
        if (!hit) continue;
        std::string fresh = freshName(g, p.lhs);
        apply(ExtractStep{fresh, *exprAt(p.rhs, *hit), {p.lhs}});
        apply(VerticalStep{fresh, false, std::nullopt});
        fired = again = true;
        break;
      }
    }
    return fired;
  }

  bool topChoices() {
    bool fired = false;
    for (bool again = true; again;) {
      again = false;
      for (const auto& name : definitionOrder(g)) {
        auto idx = productionIndicesOf(g, name);
        if (idx.size() != 1) continue;
        if (g.productions()[idx[0]].rhs.kind() != ExprKind::Choice) continue;
        apply(VerticalStep{name, false, std::nullopt});
        fired = again = true;
        break;
      }
    }
    return fired;
  }

  bool shape() {
    bool fired = false;
    for (bool again = true; again;) {
      again = false;
      // decorations over compound bodies, innermost first
      for (std::size_t i = 0; i < g.productions().size(); ++i) {
        const Production& p = g.productions()[i];
        auto hit = findInnermost(p.rhs, isCompoundDecoration);
        if (!hit) continue;
        hit->push_back(0);  // extract the body, keeping the decoration
        std::string fresh = freshName(g, p.lhs);
        apply(ExtractStep{fresh, *exprAt(p.rhs, *hit), {p.lhs}});
        fired = again = true;
        break;
      }
      if (again) continue;
      // alternatives of multi-rule nonterminals must be chains
      for (const auto& name : definitionOrder(g)) {
        auto idx = productionIndicesOf(g, name);
        if (idx.size() < 2) continue;
        for (auto i : idx) {
          const Expr& rhs = g.productions()[i].rhs;
          if (rhs.kind() == ExprKind::Nonterminal) continue;
          std::string fresh = freshName(g, name);
          apply(ExtractStep{fresh, rhs, {name}});
          fired = again = true;
          break;
        }
        if (again) break;
      }
    }
    return fired;
  }

  bool trivialChains() {
    bool fired = false;
    for (bool again = true; again;) {
      again = false;
      for (const auto& name : definitionOrder(g)) {
        if (name == g.roots().front()) continue;
        auto idx = productionIndicesOf(g, name);
        if (idx.size() != 1) continue;
        const Expr& rhs = g.productions()[idx[0]].rhs;
        if (rhs.kind() != ExprKind::Nonterminal || rhs.atom() == name)
          continue;
        apply(InlineStep{name, false, 0, std::nullopt, Expr(), {}});
        fired = again = true;
        break;
      }
    }
    return fired;
  }

  bool unreachable() {
    std::set<std::string> roots(g.roots().begin(), g.roots().end());
    auto reachable = reachableFrom(g, roots);
    std::vector<std::string> doomed;
    for (const auto& name : definitionOrder(g))
      if (!reachable.count(name)) doomed.push_back(name);
    for (const auto& name : doomed)
      apply(RemoveUnreachableStep{name, false, {}});
    return !doomed.empty();
  }
};

bool reaches(const Grammar& g, const std::string& from,
             const std::string& to) {
  std::set<std::string> seen;
  std::vector<std::string> work{from};
  while (!work.empty()) {
    std::string cur = work.back();
    work.pop_back();
    if (!seen.insert(cur).second) continue;
    if (!g.nonterminals().count(cur)) continue;
    for (auto i : productionIndicesOf(g, cur))
      for (const auto& n : nonterminalsIn(g.productions()[i].rhs)) {
        if (n == to) return true;
        work.push_back(n);
      }
  }
  return false;
}

// Exactly one of the two rules recurses (leftmost/rightmost position, rest
// free of n) and the other never mentions n.
std::optional<bool> yaccifiedShape(const Grammar& g, const std::string& n) {
  auto idx = productionIndicesOf(g, n);
  if (idx.size() != 2) return std::nullopt;
  const Expr& a = g.productions()[idx[0]].rhs;
  const Expr& b = g.productions()[idx[1]].rhs;
  auto recursive = [&](const Expr& rhs, bool left) {
    if (rhs.kind() != ExprKind::Sequence) return false;
    const auto& kids = rhs.children();
    if (!(left ? kids.front() : kids.back()).isNonterminal(n)) return false;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (left ? i == 0 : i + 1 == kids.size()) continue;
      if (nonterminalsIn(kids[i]).count(n)) return false;
    }
    return true;
  };
  auto nFree = [&](const Expr& rhs) { return !nonterminalsIn(rhs).count(n); };
  for (bool left : {true, false}) {
    if (recursive(a, left) && nFree(b)) return left;
    if (recursive(b, left) && nFree(a)) return left;
  }
  return std::nullopt;
}

std::size_t referrerCount(const Grammar& g, const std::string& n) {
  std::set<std::string> referrers;
  for (const auto& p : g.productions())
    if (p.lhs != n && nonterminalsIn(p.rhs).count(n)) referrers.insert(p.lhs);
  return referrers.size();
}

}  // namespace

NormalizationResult normalize(const Grammar& input) {
  if (input.roots().empty())
    throw NormalizeError("grammar has no root");
  for (const auto& r : input.roots())
    if (productionIndicesOf(input, r).empty())
      throw NormalizeError("root '" + r + "' is undefined");

  std::size_t nodes = 0;
  for (const auto& p : input.productions()) nodes += p.rhs.nodeCount();
  Pipeline pipe{input, {},
                10 * (input.nonterminals().size() +
                      input.productions().size() + nodes)};

  if (input.roots().size() > 1) {
    auto fromFirst = reachableFrom(input, {input.roots().front()});
    for (const auto& r : input.roots())
      if (!fromFirst.count(r))
        throw NormalizeError("root '" + r + "' is not reachable from '" +
                             input.roots().front() + "'");
    pipe.apply(RerootStep{{input.roots().front()}, std::nullopt});
  }

  for (bool any = true; any;) {
    any = false;
    if (pipe.labelsAndSelectors()) any = true;
    if (pipe.separatorLists()) any = true;
    if (pipe.terminals()) any = true;
    if (pipe.epsilonRules()) any = true;
    if (pipe.innerChoices()) any = true;
    if (pipe.topChoices()) any = true;
    if (pipe.shape()) any = true;
    if (pipe.trivialChains()) any = true;
    if (pipe.unreachable()) any = true;
  }

  ANFClassification cls = classifyANF(pipe.g);
  if (!cls.violations.empty()) {
    std::string msg = "normalization finished with residual violations:";
    for (const auto& v : cls.violations) {
      msg += "\n  ";
      if (!v.nonterminal.empty()) msg += v.nonterminal + ": ";
      msg += v.reason;
    }
    throw NormalizeError(msg);
  }
  return {std::move(pipe.g), std::move(pipe.trace), std::move(cls)};
}

std::pair<Grammar, Trace> mutateForConvergence(const Grammar& input) {
  Grammar g = input;
  Trace trace;
  auto apply = [&](const Step& s) {
    auto [next, recorded] = applyForwardRecording(g, s);
    g = std::move(next);
    trace.push_back(std::move(recorded));
  };

  for (bool any = true; any;) {
    any = false;
    for (const auto& name : definitionOrder(g)) {
      auto side = yaccifiedShape(g, name);
      if (!side) continue;
      apply(DeyaccifyStep{name, *side, false, 0, 0, std::nullopt,
                          std::nullopt});
      any = true;
      break;
    }
    if (any) continue;
    for (const auto& name : definitionOrder(g)) {
      if (std::find(g.roots().begin(), g.roots().end(), name) !=
          g.roots().end())
        continue;
      auto idx = productionIndicesOf(g, name);
      if (idx.size() != 1) continue;
      const Expr& rhs = g.productions()[idx[0]].rhs;
      if (rhs.kind() != ExprKind::Nonterminal || rhs.atom() == name) continue;
      // only collapse a chain that is a priority layer: one referrer and a
      // reference cycle back through the chain target
      if (referrerCount(g, name) != 1) continue;
      if (!reaches(g, rhs.atom(), name)) continue;
      apply(InlineStep{name, false, 0, std::nullopt, Expr(), {}});
      any = true;
      break;
    }
  }
  return {std::move(g), std::move(trace)};
}

}  // namespace gcv
