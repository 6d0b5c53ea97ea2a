#include "gcv/transform.hpp"

#include <algorithm>
#include <set>

#include "gcv/gin.hpp"

namespace gcv {

namespace {

[[noreturn]] void err(const std::string& op, const std::string& msg) {
  throw TransformError(op + ": " + msg);
}

Grammar make(const Grammar& g, std::vector<Production> prods) {
  return Grammar(g.roots(), std::move(prods));
}

// Rebuild a node with new children through the canonicalizing factories.
Expr withChildren(const Expr& e, std::vector<Expr> kids) {
  switch (e.kind()) {
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
      return Expr::selector(e.atom(), std::move(kids.front()));
    default:
      return e;
  }
}

Expr substituteNT(const Expr& e, const std::string& name, const Expr& repl,
                  std::size_t* hits = nullptr) {
  if (e.isNonterminal(name)) {
    if (hits) ++*hits;
    return repl;
  }
  if (e.children().empty()) return e;
  std::vector<Expr> kids;
  kids.reserve(e.children().size());
  for (const auto& c : e.children())
    kids.push_back(substituteNT(c, name, repl, hits));
  return withChildren(e, std::move(kids));
}

// Replaces every subtree equal to target. Occurrences cannot nest (a tree
// cannot equal its own strict subtree), so top-down replacement is complete.
Expr replaceSubtree(const Expr& e, const Expr& target, const Expr& repl,
                    std::size_t* hits) {
  if (e == target) {
    if (hits) ++*hits;
    return repl;
  }
  if (e.children().empty()) return e;
  std::vector<Expr> kids;
  kids.reserve(e.children().size());
  for (const auto& c : e.children())
    kids.push_back(replaceSubtree(c, target, repl, hits));
  return withChildren(e, std::move(kids));
}

// Global index of the index-th (1-based) production of lhs.
std::size_t globalIndex(const Grammar& g, const std::string& op,
                        const std::string& lhs, int index) {
  auto indices = productionIndicesOf(g, lhs);
  if (indices.empty()) err(op, "nonterminal '" + lhs + "' has no productions");
  if (index < 1 || static_cast<std::size_t>(index) > indices.size())
    err(op, "'" + lhs + "' has " + std::to_string(indices.size()) +
                " production(s), index " + std::to_string(index) +
                " is out of range");
  return indices[static_cast<std::size_t>(index - 1)];
}

const Expr* nodeAt(const Grammar& g, const std::string& op,
                   const Production& p, const Path& path) {
  const Expr* node = exprAt(p.rhs, path);
  if (!node)
    err(op, "path " + pathToString(path) + " does not resolve in the rhs of '" +
                p.lhs + "'");
  (void)g;
  return node;
}

// ---- rename ----------------------------------------------------------

Grammar fwd(const Grammar& g, const RenameStep& s) {
  if (!g.nonterminals().count(s.from))
    err("rename", "unknown nonterminal '" + s.from + "'");
  if (g.nonterminals().count(s.to))
    err("rename", "target name '" + s.to + "' already exists");
  std::vector<std::string> roots = g.roots();
  for (auto& r : roots)
    if (r == s.from) r = s.to;
  std::vector<Production> prods = g.productions();
  Expr repl = Expr::nonterminal(s.to);
  for (auto& p : prods) {
    if (p.lhs == s.from) p.lhs = s.to;
    p.rhs = substituteNT(p.rhs, s.from, repl);
  }
  return Grammar(std::move(roots), std::move(prods));
}

Grammar bwdCandidate(const Grammar& g, const RenameStep& s) {
  return fwd(g, RenameStep{s.to, s.from});
}

// ---- unlabel ---------------------------------------------------------

Grammar fwd(const Grammar& g, const UnlabelStep& s) {
  std::size_t at = globalIndex(g, "unlabel", s.lhs, s.index);
  std::vector<Production> prods = g.productions();
  if (!prods[at].label)
    err("unlabel", "production " + std::to_string(s.index) + " of '" + s.lhs +
                       "' carries no label");
  if (*prods[at].label != s.label)
    err("unlabel", "production " + std::to_string(s.index) + " of '" + s.lhs +
                       "' is labeled '" + *prods[at].label + "', not '" +
                       s.label + "'");
  prods[at].label.reset();
  return make(g, std::move(prods));
}

Grammar bwdCandidate(const Grammar& g, const UnlabelStep& s) {
  std::size_t at = globalIndex(g, "unlabel", s.lhs, s.index);
  std::vector<Production> prods = g.productions();
  if (prods[at].label)
    err("unlabel",
        "cannot restore label: production already labeled '" +
            *prods[at].label + "'");
  prods[at].label = s.label;
  return make(g, std::move(prods));
}

// ---- unselect --------------------------------------------------------

Grammar fwd(const Grammar& g, UnselectStep& s, bool record) {
  std::size_t at = globalIndex(g, "unselect", s.lhs, s.index);
  std::vector<Production> prods = g.productions();
  Production& p = prods[at];
  if (s.original && !(*s.original == p.rhs))
    err("unselect", "recorded rhs does not match the grammar");
  const Expr* node = nodeAt(g, "unselect", p, s.path);
  if (node->kind() != ExprKind::Selector)
    err("unselect", "node at " + pathToString(s.path) + " is not a selector");
  if (node->atom() != s.name)
    err("unselect", "selector at " + pathToString(s.path) + " is named '" +
                        node->atom() + "', not '" + s.name + "'");
  if (record) s.original = p.rhs;
  p.rhs = replaceAt(p.rhs, s.path, node->children().front());
  return make(g, std::move(prods));
}

Grammar bwdCandidate(const Grammar& g, const UnselectStep& s) {
  if (!s.original)
    err("unselect", "backward application needs the recorded rhs");
  std::size_t at = globalIndex(g, "unselect", s.lhs, s.index);
  std::vector<Production> prods = g.productions();
  prods[at].rhs = *s.original;
  return make(g, std::move(prods));
}

// ---- abstract --------------------------------------------------------

std::optional<Expr> deleteMarked(const Expr& e, bool plusVariantUnused,
                                 const std::set<Path>& marked, Path& cur) {
  (void)plusVariantUnused;
  if (marked.count(cur)) return std::nullopt;
  if (e.children().empty()) return e;
  std::vector<std::optional<Expr>> kids;
  for (int i = 0; i < static_cast<int>(e.children().size()); ++i) {
    cur.push_back(i);
    kids.push_back(
        deleteMarked(e.children()[static_cast<std::size_t>(i)], false, marked, cur));
    cur.pop_back();
  }
  switch (e.kind()) {
    case ExprKind::Sequence: {
      std::vector<Expr> kept;
      for (auto& k : kids)
        if (k) kept.push_back(std::move(*k));
      return Expr::sequence(std::move(kept));
    }
    case ExprKind::Choice: {
      // a removed alternative keeps its slot as an empty alternative
      std::vector<Expr> alts;
      for (auto& k : kids)
        alts.push_back(k ? std::move(*k) : Expr::epsilon());
      return Expr::choice(std::move(alts));
    }
    case ExprKind::Optional:
    case ExprKind::Star:
    case ExprKind::Plus:
      if (!kids[0]) return std::nullopt;
      return withChildren(e, {std::move(*kids[0])});
    case ExprKind::SepListPlus:
    case ExprKind::SepListStar:
      if (!kids[0]) return std::nullopt;
      if (!kids[1])
        return e.kind() == ExprKind::SepListPlus ? Expr::plus(std::move(*kids[0]))
                                                 : Expr::star(std::move(*kids[0]));
      return withChildren(e, {std::move(*kids[0]), std::move(*kids[1])});
    case ExprKind::Selector:
      if (!kids[0]) return std::nullopt;
      return withChildren(e, {std::move(*kids[0])});
    default:
      return e;
  }
}

Grammar fwd(const Grammar& g, AbstractStep& s, bool record) {
  if (s.removals.empty()) err("abstract", "no removals given");
  std::size_t at = globalIndex(g, "abstract", s.lhs, s.index);
  std::vector<Production> prods = g.productions();
  Production& p = prods[at];
  if (s.original && !(*s.original == p.rhs))
    err("abstract", "recorded rhs does not match the grammar");
  std::set<Path> marked;
  for (const auto& r : s.removals) {
    const Expr* node = nodeAt(g, "abstract", p, r.path);
    if (node->kind() != ExprKind::Terminal || node->atom() != r.literal)
      err("abstract", "node at " + pathToString(r.path) +
                          " is not the literal \"" + r.literal + "\"");
    if (!marked.insert(r.path).second)
      err("abstract", "duplicate removal path " + pathToString(r.path));
  }
  if (record) s.original = p.rhs;
  Path cur;
  auto result = deleteMarked(p.rhs, false, marked, cur);
  p.rhs = result ? std::move(*result) : Expr::epsilon();
  return make(g, std::move(prods));
}

Grammar bwdCandidate(const Grammar& g, const AbstractStep& s) {
  if (!s.original)
    err("abstract", "backward application needs the recorded rhs");
  std::size_t at = globalIndex(g, "abstract", s.lhs, s.index);
  std::vector<Production> prods = g.productions();
  prods[at].rhs = *s.original;
  return make(g, std::move(prods));
}

// ---- desugarSepPlus / desugarSepStar ----------------------------------

Grammar fwd(const Grammar& g, DesugarSepStep& s, bool record) {
  const std::string op = s.plusList ? "desugarSepPlus" : "desugarSepStar";
  std::size_t at = globalIndex(g, op, s.lhs, s.index);
  std::vector<Production> prods = g.productions();
  Production& p = prods[at];
  if (s.original && !(*s.original == p.rhs))
    err(op, "recorded rhs does not match the grammar");
  const Expr* node = nodeAt(g, op, p, s.path);
  ExprKind want = s.plusList ? ExprKind::SepListPlus : ExprKind::SepListStar;
  if (node->kind() != want)
    err(op, "node at " + pathToString(s.path) + " is not a " +
                (s.plusList ? "{ }+ list" : "{ }* list"));
  const Expr& element = node->children()[0];
  const Expr& separator = node->children()[1];
  if (s.separator && !(*s.separator == separator))
    err(op, "recorded separator does not match the grammar");
  if (record) {
    s.separator = separator;
    s.original = p.rhs;
  }
  Expr image;
  if (nonterminalsIn(separator).empty()) {
    // punctuation-only separators carry no structure; drop them
    image = s.plusList ? Expr::plus(element) : Expr::star(element);
  } else {
    Expr spine = Expr::sequence(
        {element, Expr::star(Expr::sequence({separator, element}))});
    image = s.plusList ? spine : Expr::optional(spine);
  }
  p.rhs = replaceAt(p.rhs, s.path, image);
  return make(g, std::move(prods));
}

Grammar bwdCandidate(const Grammar& g, const DesugarSepStep& s) {
  const std::string op = s.plusList ? "desugarSepPlus" : "desugarSepStar";
  if (!s.original) err(op, "backward application needs the recorded rhs");
  std::size_t at = globalIndex(g, op, s.lhs, s.index);
  std::vector<Production> prods = g.productions();
  prods[at].rhs = *s.original;
  return make(g, std::move(prods));
}

// ---- extract -----------------------------------------------------------

Grammar fwd(const Grammar& g, const ExtractStep& s) {
  if (g.nonterminals().count(s.name))
    err("extract", "fresh name '" + s.name + "' already exists");
  if (s.scope.empty()) err("extract", "empty scope");
  if (nonterminalsIn(s.body).count(s.name))
    err("extract", "body references the fresh nonterminal");
  for (const auto& n : s.scope)
    if (!g.nonterminals().count(n))
      err("extract", "scope nonterminal '" + n + "' is unknown");
  std::vector<Production> prods = g.productions();
  Expr repl = Expr::nonterminal(s.name);
  std::size_t hits = 0;
  for (auto& p : prods) {
    if (std::find(s.scope.begin(), s.scope.end(), p.lhs) == s.scope.end())
      continue;
    p.rhs = replaceSubtree(p.rhs, s.body, repl, &hits);
  }
  if (hits == 0)
    err("extract", "expression " + printExpr(s.body) +
                       " does not occur within the scope");
  prods.push_back({std::nullopt, s.name, s.body});
  return make(g, std::move(prods));
}

Grammar bwdCandidate(const Grammar& g, const ExtractStep& s) {
  auto indices = g.nonterminals().count(s.name)
                     ? productionIndicesOf(g, s.name)
                     : std::vector<std::size_t>{};
  if (indices.size() != 1)
    err("extract", "'" + s.name + "' must have exactly one production");
  std::vector<Production> prods = g.productions();
  if (!(prods[indices[0]].rhs == s.body))
    err("extract", "definition of '" + s.name + "' is not the recorded body");
  prods.erase(prods.begin() + static_cast<std::ptrdiff_t>(indices[0]));
  for (auto& p : prods) {
    if (std::find(s.scope.begin(), s.scope.end(), p.lhs) == s.scope.end())
      continue;
    p.rhs = substituteNT(p.rhs, s.name, s.body);
  }
  return make(g, std::move(prods));
}

// ---- inline ------------------------------------------------------------

Grammar fwd(const Grammar& g, InlineStep& s, bool record) {
  if (!g.nonterminals().count(s.name))
    err("inline", "unknown nonterminal '" + s.name + "'");
  auto indices = productionIndicesOf(g, s.name);
  if (indices.size() != 1)
    err("inline", "'" + s.name + "' must have exactly one production, has " +
                      std::to_string(indices.size()));
  if (std::find(g.roots().begin(), g.roots().end(), s.name) != g.roots().end())
    err("inline", "cannot inline the root '" + s.name + "'");
  std::size_t at = indices[0];
  const Production& def = g.productions()[at];
  if (nonterminalsIn(def.rhs).count(s.name))
    err("inline", "'" + s.name + "' occurs in its own rhs");
  if (s.recorded) {
    if (s.position != at || s.label != def.label || !(s.rhs == def.rhs))
      err("inline", "recorded context does not match the grammar");
  }
  std::vector<Production> prods;
  std::vector<InlineRestore> restores;
  for (std::size_t i = 0; i < g.productions().size(); ++i) {
    if (i == at) continue;
    Production p = g.productions()[i];
    std::size_t hits = 0;
    Expr next = substituteNT(p.rhs, s.name, def.rhs, &hits);
    if (hits > 0) {
      restores.push_back({prods.size(), p.rhs});
      p.rhs = std::move(next);
    }
    prods.push_back(std::move(p));
  }
  if (s.recorded && restores != s.restores)
    err("inline", "recorded substitutions do not match the grammar");
  if (record) {
    s.recorded = true;
    s.position = at;
    s.label = def.label;
    s.rhs = def.rhs;
    s.restores = std::move(restores);
  }
  return make(g, std::move(prods));
}

Grammar bwdCandidate(const Grammar& g, const InlineStep& s) {
  if (!s.recorded)
    err("inline", "backward application needs the recorded context");
  std::vector<Production> prods = g.productions();
  for (const auto& r : s.restores) {
    if (r.index >= prods.size())
      err("inline", "recorded production position out of range");
    prods[r.index].rhs = r.rhs;
  }
  if (s.position > prods.size())
    err("inline", "recorded definition position out of range");
  prods.insert(prods.begin() + static_cast<std::ptrdiff_t>(s.position),
               {s.label, s.name, s.rhs});
  return make(g, std::move(prods));
}

// ---- vertical ----------------------------------------------------------

Grammar fwd(const Grammar& g, VerticalStep& s, bool record) {
  if (!g.nonterminals().count(s.name))
    err("vertical", "unknown nonterminal '" + s.name + "'");
  auto indices = productionIndicesOf(g, s.name);
  if (indices.size() != 1)
    err("vertical", "'" + s.name + "' must have exactly one production");
  std::size_t at = indices[0];
  const Production& def = g.productions()[at];
  if (def.rhs.kind() != ExprKind::Choice)
    err("vertical", "rhs of '" + s.name + "' is not a choice");
  if (s.recorded && s.label != def.label)
    err("vertical", "recorded label does not match the grammar");
  if (record) {
    s.recorded = true;
    s.label = def.label;
  }
  std::vector<Production> prods = g.productions();
  prods.erase(prods.begin() + static_cast<std::ptrdiff_t>(at));
  std::size_t insert = at;
  for (const auto& alt : def.rhs.children()) {
    prods.insert(prods.begin() + static_cast<std::ptrdiff_t>(insert),
                 {std::nullopt, s.name, alt});
    ++insert;
  }
  return make(g, std::move(prods));
}

Grammar bwdCandidate(const Grammar& g, const VerticalStep& s) {
  if (!g.nonterminals().count(s.name))
    err("vertical", "unknown nonterminal '" + s.name + "'");
  auto indices = productionIndicesOf(g, s.name);
  if (indices.size() < 2)
    err("vertical", "'" + s.name + "' does not have multiple productions");
  for (std::size_t i = 1; i < indices.size(); ++i)
    if (indices[i] != indices[i - 1] + 1)
      err("vertical", "productions of '" + s.name + "' are not adjacent");
  std::vector<Expr> alts;
  for (auto i : indices) alts.push_back(g.productions()[i].rhs);
  std::vector<Production> prods = g.productions();
  prods.erase(prods.begin() + static_cast<std::ptrdiff_t>(indices.front()),
              prods.begin() + static_cast<std::ptrdiff_t>(indices.back() + 1));
  prods.insert(prods.begin() + static_cast<std::ptrdiff_t>(indices.front()),
               {s.recorded ? s.label : std::nullopt, s.name,
                Expr::choice(std::move(alts))});
  return make(g, std::move(prods));
}

// ---- widen / narrow ----------------------------------------------------

Grammar fwd(const Grammar& g, WidenStep& s, bool record) {
  const std::string op = s.widen ? "widen" : "narrow";
  std::size_t at = globalIndex(g, op, s.name, s.index);
  std::vector<Production> prods = g.productions();
  Production& p = prods[at];
  ExprKind from = s.widen ? ExprKind::Plus : ExprKind::Star;
  Path where;
  if (s.path) {
    where = *s.path;
    const Expr* node = nodeAt(g, op, p, where);
    if (node->kind() != from)
      err(op, "node at " + pathToString(where) + " is not a " +
                  (s.widen ? "plus" : "star") + " repetition");
  } else {
    auto all = findAll(p.rhs, [&](const Expr& e) { return e.kind() == from; });
    if (all.empty())
      err(op, "rhs of production " + std::to_string(s.index) + " of '" +
                  s.name + "' has no " + (s.widen ? "plus" : "star") +
                  " repetition");
    where = all.front();
  }
  if (record) s.path = where;
  const Expr* node = exprAt(p.rhs, where);
  Expr body = node->children().front();
  p.rhs = replaceAt(p.rhs, where,
                    s.widen ? Expr::star(std::move(body))
                            : Expr::plus(std::move(body)));
  return make(g, std::move(prods));
}

Grammar bwdCandidate(const Grammar& g, const WidenStep& s) {
  WidenStep inverse = s;
  inverse.widen = !s.widen;
  return fwd(g, inverse, false);
}

// ---- permute -----------------------------------------------------------

std::size_t permuteTarget(const Grammar& g, const PermuteStep& s) {
  if (!g.nonterminals().count(s.name))
    err("permute", "unknown nonterminal '" + s.name + "'");
  auto indices = productionIndicesOf(g, s.name);
  if (indices.size() != 1)
    err("permute", "'" + s.name + "' must have exactly one production");
  return indices[0];
}

Grammar applyPermutation(const Grammar& g, std::size_t at,
                         const std::vector<int>& order) {
  const Expr& rhs = g.productions()[at].rhs;
  if (rhs.kind() != ExprKind::Sequence)
    err("permute", "rhs is not a sequence");
  std::size_t k = rhs.children().size();
  if (order.size() != k)
    err("permute", "order lists " + std::to_string(order.size()) +
                       " positions for a sequence of " + std::to_string(k));
  std::vector<bool> seen(k, false);
  bool identity = true;
  for (std::size_t i = 0; i < k; ++i) {
    int o = order[i];
    if (o < 1 || static_cast<std::size_t>(o) > k || seen[static_cast<std::size_t>(o - 1)])
      err("permute", "order is not a permutation of 1.." + std::to_string(k));
    seen[static_cast<std::size_t>(o - 1)] = true;
    identity = identity && static_cast<std::size_t>(o) == i + 1;
  }
  if (identity) err("permute", "identity permutation would be a no-op");
  std::vector<Expr> kids;
  kids.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    kids.push_back(rhs.children()[static_cast<std::size_t>(order[i] - 1)]);
  std::vector<Production> prods = g.productions();
  prods[at].rhs = Expr::sequence(std::move(kids));
  return make(g, std::move(prods));
}

Grammar fwd(const Grammar& g, const PermuteStep& s) {
  return applyPermutation(g, permuteTarget(g, s), s.order);
}

Grammar bwdCandidate(const Grammar& g, const PermuteStep& s) {
  std::vector<int> inverse(s.order.size());
  for (std::size_t i = 0; i < s.order.size(); ++i) {
    int o = s.order[i];
    if (o < 1 || static_cast<std::size_t>(o) > s.order.size())
      err("permute", "order is not a permutation");
    inverse[static_cast<std::size_t>(o - 1)] = static_cast<int>(i) + 1;
  }
  return applyPermutation(g, permuteTarget(g, s), inverse);
}

// ---- deyaccify ---------------------------------------------------------

bool matchesRecursion(const Expr& rhs, const std::string& n, bool left) {
  if (rhs.kind() != ExprKind::Sequence) return false;
  const auto& kids = rhs.children();
  const Expr& anchor = left ? kids.front() : kids.back();
  if (!anchor.isNonterminal(n)) return false;
  std::vector<Expr> rest(left ? kids.begin() + 1 : kids.begin(),
                         left ? kids.end() : kids.end() - 1);
  Expr restSeq = Expr::sequence(std::move(rest));
  return !nonterminalsIn(restSeq).count(n);
}

Grammar fwd(const Grammar& g, DeyaccifyStep& s, bool record) {
  if (!g.nonterminals().count(s.name))
    err("deyaccify", "unknown nonterminal '" + s.name + "'");
  auto indices = productionIndicesOf(g, s.name);
  if (indices.size() != 2)
    err("deyaccify", "'" + s.name + "' must have exactly two productions");
  const Production& p0 = g.productions()[indices[0]];
  const Production& p1 = g.productions()[indices[1]];
  bool rec0 = matchesRecursion(p0.rhs, s.name, s.leftRecursive);
  bool rec1 = matchesRecursion(p1.rhs, s.name, s.leftRecursive);
  if (rec0 == rec1)
    err("deyaccify", std::string("productions of '") + s.name +
                         "' do not match the " +
                         (s.leftRecursive ? "left" : "right") +
                         "-recursive pattern exactly");
  std::size_t recPos = rec0 ? indices[0] : indices[1];
  std::size_t basePos = rec0 ? indices[1] : indices[0];
  const Production& base = g.productions()[basePos];
  const Production& rec = g.productions()[recPos];
  if (nonterminalsIn(base.rhs).count(s.name))
    err("deyaccify", "base production of '" + s.name + "' is recursive too");
  if (s.recorded) {
    if (s.basePosition != basePos || s.recPosition != recPos ||
        s.baseLabel != base.label || s.recLabel != rec.label)
      err("deyaccify", "recorded context does not match the grammar");
  }
  if (record) {
    s.recorded = true;
    s.basePosition = basePos;
    s.recPosition = recPos;
    s.baseLabel = base.label;
    s.recLabel = rec.label;
  }
  const auto& kids = rec.rhs.children();
  Expr fused;
  if (s.leftRecursive) {
    Expr tail = Expr::sequence({kids.begin() + 1, kids.end()});
    fused = Expr::sequence({base.rhs, Expr::star(std::move(tail))});
  } else {
    Expr head = Expr::sequence({kids.begin(), kids.end() - 1});
    fused = Expr::sequence({Expr::star(std::move(head)), base.rhs});
  }
  std::vector<Production> prods = g.productions();
  prods.erase(prods.begin() + static_cast<std::ptrdiff_t>(indices[1]));
  prods.erase(prods.begin() + static_cast<std::ptrdiff_t>(indices[0]));
  prods.insert(prods.begin() + static_cast<std::ptrdiff_t>(indices[0]),
               {std::nullopt, s.name, std::move(fused)});
  return make(g, std::move(prods));
}

Grammar bwdCandidate(const Grammar& g, const DeyaccifyStep& s) {
  if (!s.recorded)
    err("deyaccify", "backward application needs the recorded context");
  if (!g.nonterminals().count(s.name))
    err("deyaccify", "unknown nonterminal '" + s.name + "'");
  auto indices = productionIndicesOf(g, s.name);
  if (indices.size() != 1)
    err("deyaccify", "'" + s.name + "' must have exactly one production");
  const Expr& fused = g.productions()[indices[0]].rhs;
  Expr base, restSeq;
  if (s.leftRecursive) {
    if (fused.kind() == ExprKind::Star) {
      base = Expr::epsilon();
      restSeq = fused.children().front();
    } else if (fused.kind() == ExprKind::Sequence &&
               fused.children().back().kind() == ExprKind::Star) {
      base = Expr::sequence(
          {fused.children().begin(), fused.children().end() - 1});
      restSeq = fused.children().back().children().front();
    } else {
      err("deyaccify", "rhs of '" + s.name + "' does not end in a repetition");
    }
  } else {
    if (fused.kind() == ExprKind::Star) {
      base = Expr::epsilon();
      restSeq = fused.children().front();
    } else if (fused.kind() == ExprKind::Sequence &&
               fused.children().front().kind() == ExprKind::Star) {
      base = Expr::sequence(
          {fused.children().begin() + 1, fused.children().end()});
      restSeq = fused.children().front().children().front();
    } else {
      err("deyaccify",
          "rhs of '" + s.name + "' does not begin with a repetition");
    }
  }
  Expr recRhs = s.leftRecursive
                    ? Expr::sequence({Expr::nonterminal(s.name), restSeq})
                    : Expr::sequence({restSeq, Expr::nonterminal(s.name)});
  std::vector<Production> prods = g.productions();
  prods.erase(prods.begin() + static_cast<std::ptrdiff_t>(indices[0]));
  Production baseProd{s.baseLabel, s.name, std::move(base)};
  Production recProd{s.recLabel, s.name, std::move(recRhs)};
  // reinsert at the recorded positions, lower one first
  if (s.basePosition < s.recPosition) {
    prods.insert(prods.begin() + static_cast<std::ptrdiff_t>(s.basePosition),
                 std::move(baseProd));
    prods.insert(prods.begin() + static_cast<std::ptrdiff_t>(s.recPosition),
                 std::move(recProd));
  } else {
    prods.insert(prods.begin() + static_cast<std::ptrdiff_t>(s.recPosition),
                 std::move(recProd));
    prods.insert(prods.begin() + static_cast<std::ptrdiff_t>(s.basePosition),
                 std::move(baseProd));
  }
  return make(g, std::move(prods));
}

// ---- removeUnreachable ---------------------------------------------------

Grammar fwd(const Grammar& g, RemoveUnreachableStep& s, bool record) {
  if (!g.nonterminals().count(s.name))
    err("removeUnreachable", "unknown nonterminal '" + s.name + "'");
  std::set<std::string> roots(g.roots().begin(), g.roots().end());
  if (reachableFrom(g, roots).count(s.name))
    err("removeUnreachable", "'" + s.name + "' is reachable from the roots");
  auto indices = productionIndicesOf(g, s.name);
  if (indices.empty())
    err("removeUnreachable", "'" + s.name + "' has no productions to remove");
  std::vector<RemovedProduction> removed;
  for (auto i : indices)
    removed.push_back({i, g.productions()[i].label, g.productions()[i].rhs});
  if (s.recorded && removed != s.removed)
    err("removeUnreachable", "recorded productions do not match the grammar");
  if (record) {
    s.recorded = true;
    s.removed = std::move(removed);
  }
  std::vector<Production> prods = g.productions();
  for (auto it = indices.rbegin(); it != indices.rend(); ++it)
    prods.erase(prods.begin() + static_cast<std::ptrdiff_t>(*it));
  return make(g, std::move(prods));
}

Grammar bwdCandidate(const Grammar& g, const RemoveUnreachableStep& s) {
  if (!s.recorded)
    err("removeUnreachable", "backward application needs the recorded rules");
  std::vector<Production> prods = g.productions();
  for (const auto& r : s.removed) {
    if (r.position > prods.size())
      err("removeUnreachable", "recorded position out of range");
    prods.insert(prods.begin() + static_cast<std::ptrdiff_t>(r.position),
                 {r.label, s.name, r.rhs});
  }
  return make(g, std::move(prods));
}

// ---- reroot --------------------------------------------------------------

Grammar fwd(const Grammar& g, RerootStep& s, bool record) {
  if (s.newRoots.empty()) err("reroot", "new root set is empty");
  std::set<std::string> uniq(s.newRoots.begin(), s.newRoots.end());
  if (uniq.size() != s.newRoots.size())
    err("reroot", "duplicate name in the new root set");
  for (const auto& r : s.newRoots)
    if (!g.nonterminals().count(r))
      err("reroot", "new root '" + r + "' is unknown");
  if (s.newRoots == g.roots()) err("reroot", "root set is unchanged");
  if (s.oldRoots && *s.oldRoots != g.roots())
    err("reroot", "recorded previous roots do not match the grammar");
  if (record) s.oldRoots = g.roots();
  return Grammar(s.newRoots, g.productions());
}

Grammar bwdCandidate(const Grammar& g, const RerootStep& s) {
  if (!s.oldRoots)
    err("reroot", "backward application needs the recorded previous roots");
  RerootStep inverse;
  inverse.newRoots = *s.oldRoots;
  inverse.oldRoots = s.newRoots;
  return fwd(g, inverse, false);
}

// ---- eliminateEpsilon ------------------------------------------------------

Grammar fwd(const Grammar& g, EliminateEpsilonStep& s, bool record) {
  if (!g.nonterminals().count(s.name))
    err("eliminateEpsilon", "unknown nonterminal '" + s.name + "'");
  std::size_t pos = 0;
  std::vector<EpsOccurrence> occs;
  if (s.recorded) {
    pos = s.position;
    occs = s.occurrences;
    if (pos >= g.productions().size())
      err("eliminateEpsilon", "recorded position out of range");
  } else {
    bool found = false;
    for (std::size_t i = 0; i < g.productions().size(); ++i) {
      const auto& p = g.productions()[i];
      if (p.lhs == s.name && !p.label && p.rhs.kind() == ExprKind::Epsilon) {
        pos = i;
        found = true;
        break;
      }
    }
    if (!found)
      err("eliminateEpsilon",
          "'" + s.name + "' has no unlabeled epsilon production");
    for (std::size_t i = 0; i < g.productions().size(); ++i) {
      for (auto& path : findAll(g.productions()[i].rhs, [&](const Expr& e) {
             return e.isNonterminal(s.name);
           }))
        occs.push_back({i, std::move(path)});
    }
  }
  const Production& eps = g.productions()[pos];
  if (eps.lhs != s.name || eps.label ||
      eps.rhs.kind() != ExprKind::Epsilon)
    err("eliminateEpsilon", "production at the recorded position is not an "
                            "unlabeled '" + s.name + " ::= eps'");
  std::vector<Production> prods = g.productions();
  for (const auto& occ : occs) {
    if (occ.production >= prods.size())
      err("eliminateEpsilon", "occurrence production index out of range");
    Production& p = prods[occ.production];
    const Expr* node = exprAt(p.rhs, occ.path);
    if (!node || !node->isNonterminal(s.name))
      err("eliminateEpsilon", "no occurrence of '" + s.name + "' at " +
                                  pathToString(occ.path));
    p.rhs = replaceAt(p.rhs, occ.path,
                      Expr::optional(Expr::nonterminal(s.name)));
  }
  prods.erase(prods.begin() + static_cast<std::ptrdiff_t>(pos));
  if (record) {
    s.recorded = true;
    s.position = pos;
    s.occurrences = std::move(occs);
  }
  return make(g, std::move(prods));
}

Grammar bwdCandidate(const Grammar& g, const EliminateEpsilonStep& s) {
  if (!s.recorded)
    err("eliminateEpsilon", "backward application needs the recorded context");
  std::vector<Production> prods = g.productions();
  if (s.position > prods.size())
    err("eliminateEpsilon", "recorded position out of range");
  prods.insert(prods.begin() + static_cast<std::ptrdiff_t>(s.position),
               {std::nullopt, s.name, Expr::epsilon()});
  for (const auto& occ : s.occurrences) {
    if (occ.production >= prods.size())
      err("eliminateEpsilon", "occurrence production index out of range");
    Production& p = prods[occ.production];
    const Expr* node = exprAt(p.rhs, occ.path);
    if (!node || node->kind() != ExprKind::Optional ||
        !node->children().front().isNonterminal(s.name))
      err("eliminateEpsilon", "no optional occurrence of '" + s.name +
                                  "' at " + pathToString(occ.path));
    p.rhs = replaceAt(p.rhs, occ.path, Expr::nonterminal(s.name));
  }
  return make(g, std::move(prods));
}

// ---- dispatch -------------------------------------------------------------

Grammar forwardImpl(const Grammar& g, Step& s, bool record) {
  return std::visit(
      [&](auto& step) -> Grammar {
        using T = std::decay_t<decltype(step)>;
        if constexpr (std::is_same_v<T, RenameStep> ||
                      std::is_same_v<T, UnlabelStep> ||
                      std::is_same_v<T, ExtractStep> ||
                      std::is_same_v<T, PermuteStep>) {
          return fwd(g, step);
        } else {
          return fwd(g, step, record);
        }
      },
      s);
}

}  // namespace

std::string opName(const Step& s) {
  return std::visit(
      [](const auto& step) -> std::string {
        using T = std::decay_t<decltype(step)>;
        if constexpr (std::is_same_v<T, RenameStep>) return "rename";
        if constexpr (std::is_same_v<T, UnlabelStep>) return "unlabel";
        if constexpr (std::is_same_v<T, UnselectStep>) return "unselect";
        if constexpr (std::is_same_v<T, AbstractStep>) return "abstract";
        if constexpr (std::is_same_v<T, DesugarSepStep>)
          return step.plusList ? "desugarSepPlus" : "desugarSepStar";
        if constexpr (std::is_same_v<T, ExtractStep>) return "extract";
        if constexpr (std::is_same_v<T, InlineStep>) return "inline";
        if constexpr (std::is_same_v<T, VerticalStep>) return "vertical";
        if constexpr (std::is_same_v<T, WidenStep>)
          return step.widen ? "widen" : "narrow";
        if constexpr (std::is_same_v<T, PermuteStep>) return "permute";
        if constexpr (std::is_same_v<T, DeyaccifyStep>) return "deyaccify";
        if constexpr (std::is_same_v<T, RemoveUnreachableStep>)
          return "removeUnreachable";
        if constexpr (std::is_same_v<T, RerootStep>) return "reroot";
        if constexpr (std::is_same_v<T, EliminateEpsilonStep>)
          return "eliminateEpsilon";
        return "?";
      },
      s);
}

Grammar applyForward(const Grammar& g, const Step& s) {
  Step copy = s;
  return forwardImpl(g, copy, false);
}

std::pair<Grammar, Step> applyForwardRecording(const Grammar& g,
                                               const Step& s) {
  Step copy = s;
  Grammar out = forwardImpl(g, copy, true);
  return {std::move(out), std::move(copy)};
}

Grammar applyBackward(const Grammar& g, const Step& s) {
  Grammar candidate = std::visit(
      [&](const auto& step) { return bwdCandidate(g, step); }, s);
  // The inverse constructions above are exact for every recorded step; the
  // round-trip check also rejects grammars outside the step's image.
  Grammar redo = applyForward(candidate, s);
  if (!grammarIdentical(redo, g))
    throw TransformError(opName(s) +
                         ": grammar is not in the image of this step");
  return candidate;
}

Grammar applyTrace(const Grammar& g, const Trace& trace, Direction dir) {
  Grammar cur = g;
  if (dir == Direction::Forward) {
    for (std::size_t i = 0; i < trace.size(); ++i) {
      try {
        cur = applyForward(cur, trace[i]);
      } catch (const TransformError& e) {
        throw TransformError("step " + std::to_string(i + 1) + ": " +
                             e.what());
      }
    }
  } else {
    for (std::size_t i = trace.size(); i-- > 0;) {
      try {
        cur = applyBackward(cur, trace[i]);
      } catch (const TransformError& e) {
        throw TransformError("step " + std::to_string(i + 1) + ": " +
                             e.what());
      }
    }
  }
  return cur;
}

}  // namespace gcv
