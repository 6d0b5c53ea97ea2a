#include "gcv/grammar.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace gcv {

std::strong_ordering Production::operator<=>(const Production& other) const {
  if (auto c = lhs <=> other.lhs; c != 0) return c;
  // optional<string> has no <=> in libstdc++ 11, compare by hand
  bool la = label.has_value(), lb = other.label.has_value();
  if (la != lb) return la <=> lb;
  if (la) {
    if (auto c = *label <=> *other.label; c != 0) return c;
  }
  return rhs <=> other.rhs;
}

static void collectSymbols(const Expr& e, std::set<std::string>& nts,
                           std::set<std::string>& ts) {
  switch (e.kind()) {
    case ExprKind::Nonterminal:
      nts.insert(e.atom());
      break;
    case ExprKind::Terminal:
      ts.insert(e.atom());
      break;
    default:
      break;
  }
  for (const auto& c : e.children()) collectSymbols(c, nts, ts);
}

Grammar::Grammar(std::vector<std::string> roots,
                 std::vector<Production> productions)
    : roots_(std::move(roots)), productions_(std::move(productions)) {
  for (const auto& r : roots_) nonterminals_.insert(r);
  for (const auto& p : productions_) {
    nonterminals_.insert(p.lhs);
    collectSymbols(p.rhs, nonterminals_, terminals_);
  }
}

bool Grammar::defines(const std::string& n) const {
  return std::any_of(productions_.begin(), productions_.end(),
                     [&](const Production& p) { return p.lhs == n; });
}

bool grammarIdentical(const Grammar& a, const Grammar& b) {
  return a.roots() == b.roots() && a.nonterminals() == b.nonterminals() &&
         a.terminals() == b.terminals() && a.productions() == b.productions();
}

bool nominallyEquivalent(const Grammar& a, const Grammar& b) {
  if (a.roots() != b.roots() || a.nonterminals() != b.nonterminals() ||
      a.terminals() != b.terminals())
    return false;
  if (a.productions().size() != b.productions().size()) return false;
  auto pa = a.productions();
  auto pb = b.productions();
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  return pa == pb;
}

std::vector<Production> productionsOf(const Grammar& g, const std::string& n) {
  if (!g.nonterminals().count(n))
    throw std::invalid_argument("productionsOf: unknown nonterminal " + n);
  std::vector<Production> out;
  for (const auto& p : g.productions())
    if (p.lhs == n) out.push_back(p);
  return out;
}

std::vector<std::size_t> productionIndicesOf(const Grammar& g,
                                             const std::string& n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.productions().size(); ++i)
    if (g.productions()[i].lhs == n) out.push_back(i);
  return out;
}

std::set<std::string> nonterminalsIn(const Expr& e) {
  std::set<std::string> nts, ts;
  collectSymbols(e, nts, ts);
  return nts;
}

std::set<std::string> reachableFrom(const Grammar& g,
                                    const std::set<std::string>& start) {
  for (const auto& s : start)
    if (!g.nonterminals().count(s))
      throw std::invalid_argument("reachableFrom: unknown nonterminal " + s);
  // Group rhs symbols by lhs once, then breadth-first closure.
  std::map<std::string, std::set<std::string>> mentions;
  for (const auto& p : g.productions()) {
    auto nts = nonterminalsIn(p.rhs);
    mentions[p.lhs].insert(nts.begin(), nts.end());
  }
  std::set<std::string> reached = start;
  std::deque<std::string> work(start.begin(), start.end());
  while (!work.empty()) {
    std::string n = work.front();
    work.pop_front();
    auto it = mentions.find(n);
    if (it == mentions.end()) continue;
    for (const auto& m : it->second)
      if (reached.insert(m).second) work.push_back(m);
  }
  return reached;
}

bool isChainRhs(const Expr& rhs) { return rhs.kind() == ExprKind::Nonterminal; }

bool isDecoratedAtom(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Nonterminal:
      return true;
    case ExprKind::Optional:
    case ExprKind::Star:
    case ExprKind::Plus:
      return e.children().front().kind() == ExprKind::Nonterminal;
    default:
      return false;
  }
}

bool isAtomSequence(const Expr& rhs) {
  if (rhs.kind() == ExprKind::Sequence) {
    return std::all_of(rhs.children().begin(), rhs.children().end(),
                       isDecoratedAtom);
  }
  return isDecoratedAtom(rhs);
}

ANFClassification classifyANF(const Grammar& g) {
  ANFClassification out;
  if (!g.terminals().empty()) {
    out.violations.push_back(
        {"", "terminal set must be empty, found \"" + *g.terminals().begin() +
                 "\""});
  }
  if (g.roots().size() != 1) {
    out.violations.push_back(
        {"", "exactly one root required, found " +
                 std::to_string(g.roots().size())});
  }
  for (const auto& n : g.nonterminals()) {
    auto indices = productionIndicesOf(g, n);
    if (indices.empty()) {
      out.bottomSet.insert(n);
      continue;
    }
    bool allChains = true;
    for (auto i : indices)
      allChains = allChains && isChainRhs(g.productions()[i].rhs);
    if (allChains) {
      out.plusSet.insert(n);
      continue;
    }
    if (indices.size() == 1 && isAtomSequence(g.productions()[indices[0]].rhs)) {
      out.minusSet.insert(n);
      continue;
    }
    if (indices.size() > 1) {
      out.violations.push_back(
          {n, "multiple rules must all be chain rules"});
    } else {
      out.violations.push_back(
          {n, "rhs must be a nonempty sequence of decorated nonterminals"});
    }
  }
  for (const auto& r : g.roots()) {
    if (!out.plusSet.count(r) && !out.minusSet.count(r)) {
      out.violations.push_back({r, "root must be defined by chain or structure rules"});
    }
  }
  return out;
}

}  // namespace gcv
