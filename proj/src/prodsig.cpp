#include "gcv/prodsig.hpp"

#include <algorithm>
#include <set>

namespace gcv {

namespace {

constexpr const char* kMarkerNames[4] = {"one", "opt", "plus", "star"};

void footprintInto(const std::string& n, const Expr& x, Footprint& out) {
  switch (x.kind()) {
    case ExprKind::Nonterminal:
      if (x.atom() == n) out.add(Marker::One);
      break;
    case ExprKind::Optional:
      if (x.children().front().isNonterminal(n)) out.add(Marker::Opt);
      break;
    case ExprKind::Plus:
      if (x.children().front().isNonterminal(n)) out.add(Marker::Plus);
      break;
    case ExprKind::Star:
      if (x.children().front().isNonterminal(n)) out.add(Marker::Star);
      break;
    case ExprKind::Selector:
      footprintInto(n, x.children().front(), out);
      break;
    case ExprKind::Sequence:
      for (const auto& c : x.children()) footprintInto(n, c, out);
      break;
    default:
      break;  // choices, separator lists, terminals, eps are opaque
  }
}

}  // namespace

std::size_t Footprint::size() const {
  std::size_t total = 0;
  for (int c : counts) total += static_cast<std::size_t>(c);
  return total;
}

std::string footprintToString(const Footprint& f) {
  std::string out = "{";
  bool first = true;
  for (std::size_t m = 0; m < 4; ++m) {
    for (int i = 0; i < f.counts[m]; ++i) {
      if (!first) out += ',';
      out += kMarkerNames[m];
      first = false;
    }
  }
  out += '}';
  return out;
}

Footprint footprint(const std::string& n, const Expr& x) {
  Footprint out;
  footprintInto(n, x, out);
  return out;
}

Footprint plusToStar(Footprint f) {
  f.counts[static_cast<std::size_t>(Marker::Star)] +=
      f.counts[static_cast<std::size_t>(Marker::Plus)];
  f.counts[static_cast<std::size_t>(Marker::Plus)] = 0;
  return f;
}

bool footprintEquiv(const Footprint& a, const Footprint& b) {
  return a == b || plusToStar(a) == plusToStar(b);
}

ProdSig prodsig(const Production& p) {
  ProdSig sig;
  for (const auto& n : nonterminalsIn(p.rhs)) {
    Footprint f = footprint(n, p.rhs);
    if (!f.empty()) sig.emplace(n, f);
  }
  return sig;
}

std::string prodsigToString(const ProdSig& sig) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, fp] : sig) {
    if (!first) out += ", ";
    out += name;
    out += ':';
    out += footprintToString(fp);
    first = false;
  }
  out += '}';
  return out;
}

bool prodsigEquiv(const Production& p, const Production& q) {
  ProdSig sp = prodsig(p);
  ProdSig sq = prodsig(q);
  if (sp.size() != sq.size()) return false;
  // footprintEquiv(a, b) holds exactly when the blurred footprints are
  // equal, so a perfect matching exists iff the blurred multisets agree.
  std::vector<Footprint> fa, fb;
  for (const auto& [n, f] : sp) fa.push_back(plusToStar(f));
  for (const auto& [n, f] : sq) fb.push_back(plusToStar(f));
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  return fa == fb;
}

bool resolutionPairLess(const ResolutionPair& a, const ResolutionPair& b) {
  auto key = [](const std::optional<std::string>& s) {
    return s ? std::pair<int, const std::string*>(1, &*s)
             : std::pair<int, const std::string*>(0, nullptr);
  };
  auto [ta, pa] = key(a.left);
  auto [tb, pb] = key(b.left);
  if (ta != tb) return ta < tb;
  if (pa && *pa != *pb) return *pa < *pb;
  auto [ua, qa] = key(a.right);
  auto [ub, qb] = key(b.right);
  if (ua != ub) return ua < ub;
  if (qa) return *qa < *qb;
  return false;
}

std::string resolutionToString(const NominalResolution& r) {
  std::string out;
  for (const auto& p : r.pairs) {
    out += p.left ? *p.left : "-";
    out += " -> ";
    out += p.right ? *p.right : "-";
    out += '\n';
  }
  return out;
}

namespace {

// Sorted unique pair list; false when a name maps two ways.
bool functionalBothWays(std::vector<ResolutionPair>& pairs) {
  std::sort(pairs.begin(), pairs.end(), resolutionPairLess);
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i].left && pairs[i - 1].left &&
        *pairs[i].left == *pairs[i - 1].left)
      return false;
  std::set<std::string> rights;
  for (const auto& p : pairs)
    if (p.right && !rights.insert(*p.right).second) return false;
  return true;
}

}  // namespace

std::vector<NominalResolution> productionResolutions(const Production& p,
                                                     const Production& q) {
  if (!prodsigEquiv(p, q))
    throw MatchError("productionResolutions: signatures of '" + p.lhs +
                     "' and '" + q.lhs + "' are not equivalent");
  ProdSig sp = prodsig(p);
  ProdSig sq = prodsig(q);
  std::vector<std::pair<std::string, Footprint>> lefts(sp.begin(), sp.end());
  std::vector<std::pair<std::string, Footprint>> rights(sq.begin(), sq.end());

  std::vector<NominalResolution> out;
  std::vector<std::size_t> pick(lefts.size());
  std::vector<bool> used(rights.size(), false);

  auto emit = [&] {
    std::vector<ResolutionPair> pairs;
    pairs.reserve(lefts.size() + 1);
    for (std::size_t i = 0; i < lefts.size(); ++i)
      pairs.push_back({lefts[i].first, rights[pick[i]].first});
    pairs.push_back({p.lhs, q.lhs});
    if (functionalBothWays(pairs)) out.push_back({std::move(pairs)});
  };

  auto walk = [&](auto&& self, std::size_t i) -> void {
    if (i == lefts.size()) {
      emit();
      return;
    }
    for (std::size_t j = 0; j < rights.size(); ++j) {
      if (used[j] || !footprintEquiv(lefts[i].second, rights[j].second))
        continue;
      used[j] = true;
      pick[i] = j;
      self(self, i + 1);
      used[j] = false;
    }
  };
  walk(walk, 0);
  return out;
}

namespace {

using PairList = std::vector<std::pair<std::string, std::string>>;

struct SearchState {
  std::map<std::string, std::string> s2m;  // servant name -> master name
  std::map<std::string, std::string> m2s;
  PairList agenda;  // matched pairs whose production rules are still pending
};

struct Search {
  Search(const Grammar& m, const Grammar& s) : master(m), servant(s) {}

  const Grammar& master;
  const Grammar& servant;
  std::size_t nodes = 0;
  static constexpr std::size_t kNodeBudget = 200000;

  std::optional<PairList> first;
  std::set<PairList> found;

  std::size_t deepest = 0;
  NominalResolution deepestPartial;
  std::optional<std::pair<std::string, std::string>> frontier;
  std::string reason;

  void recordFailure(const SearchState& st, const std::string& s,
                     const std::string& m, std::string why) {
    if (st.s2m.size() < deepest) return;
    deepest = st.s2m.size();
    deepestPartial.pairs.clear();
    for (const auto& [a, b] : st.s2m) deepestPartial.pairs.push_back({a, b});
    frontier = {s, m};
    reason = std::move(why);
  }

  // Adds (s, m); false on conflict with the accumulated correspondence.
  static bool extend(SearchState& st, const std::string& s,
                     const std::string& m) {
    auto is = st.s2m.find(s);
    if (is != st.s2m.end()) return is->second == m;
    auto im = st.m2s.find(m);
    if (im != st.m2s.end()) return im->second == s;
    st.s2m.emplace(s, m);
    st.m2s.emplace(m, s);
    st.agenda.push_back({s, m});
    return true;
  }

  // Returns false to abort the whole search (budget spent after a hit).
  bool dfs(SearchState st) {
    if (++nodes > kNodeBudget) {
      if (first) return false;
      throw MatchError("global resolution search budget exhausted");
    }
    if (st.agenda.empty()) {
      PairList full(st.s2m.begin(), st.s2m.end());
      if (!first) first = full;
      found.insert(std::move(full));
      return true;
    }
    auto [s, m] = st.agenda.front();
    st.agenda.erase(st.agenda.begin());

    auto sIdx = productionIndicesOf(servant, s);
    auto mIdx = productionIndicesOf(master, m);
    if (sIdx.size() != mIdx.size()) {
      recordFailure(st, s, m,
                    "'" + s + "' has " + std::to_string(sIdx.size()) +
                        " production rule(s) but '" + m + "' has " +
                        std::to_string(mIdx.size()));
      return true;
    }
    if (sIdx.empty()) return dfs(std::move(st));  // both undefined

    if (sIdx.size() == 1) {
      const Production& sp = servant.productions()[sIdx[0]];
      const Production& mp = master.productions()[mIdx[0]];
      if (!prodsigEquiv(sp, mp)) {
        recordFailure(st, s, m,
                      "signatures differ: " + prodsigToString(prodsig(sp)) +
                          " vs " + prodsigToString(prodsig(mp)));
        return true;
      }
      auto resolutions = productionResolutions(sp, mp);
      if (resolutions.empty()) {
        recordFailure(st, s, m,
                      "no resolution of the rules is functional both ways");
        return true;
      }
      for (const auto& res : resolutions) {
        SearchState next = st;
        bool ok = true;
        for (const auto& pr : res.pairs) {
          if (!pr.left || !pr.right) continue;
          if (!extend(next, *pr.left, *pr.right)) {
            ok = false;
            break;
          }
        }
        if (!ok) {
          recordFailure(st, s, m,
                        "rule resolution conflicts with established pairs");
          continue;
        }
        if (!dfs(std::move(next))) return false;
      }
      return true;
    }

    // Several rules: in normal form these are chain groups on both sides.
    std::set<std::string> sTargetSet, mTargetSet;
    for (auto i : sIdx) {
      const Expr& rhs = servant.productions()[i].rhs;
      if (rhs.kind() != ExprKind::Nonterminal)
        throw MatchError("'" + s + "' has several non-chain rules; input is "
                                    "not in abstract normal form");
      sTargetSet.insert(rhs.atom());
    }
    for (auto i : mIdx) {
      const Expr& rhs = master.productions()[i].rhs;
      if (rhs.kind() != ExprKind::Nonterminal)
        throw MatchError("'" + m + "' has several non-chain rules; input is "
                                    "not in abstract normal form");
      mTargetSet.insert(rhs.atom());
    }
    if (sTargetSet.size() != mTargetSet.size()) {
      recordFailure(st, s, m,
                    "chain groups reference " +
                        std::to_string(sTargetSet.size()) + " vs " +
                        std::to_string(mTargetSet.size()) + " nonterminals");
      return true;
    }
    std::vector<std::string> sTargets(sTargetSet.begin(), sTargetSet.end());
    std::vector<std::string> mTargets(mTargetSet.begin(), mTargetSet.end());
    std::vector<bool> used(mTargets.size(), false);
    std::vector<std::size_t> pick(sTargets.size());
    bool anyConsistent = false;

    auto assign = [&](auto&& self, std::size_t i) -> bool {
      if (i == sTargets.size()) {
        SearchState next = st;
        for (std::size_t k = 0; k < sTargets.size(); ++k)
          if (!extend(next, sTargets[k], mTargets[pick[k]])) return true;
        anyConsistent = true;
        return dfs(std::move(next));
      }
      for (std::size_t j = 0; j < mTargets.size(); ++j) {
        if (used[j]) continue;
        used[j] = true;
        pick[i] = j;
        bool keep = self(self, i + 1);
        used[j] = false;
        if (!keep) return false;
      }
      return true;
    };
    if (!assign(assign, 0)) return false;
    if (!anyConsistent)
      recordFailure(st, s, m,
                    "no pairing of the chain alternatives is consistent "
                    "with established pairs");
    return true;
  }
};

}  // namespace

MatchResult globalResolution(const Grammar& master, const Grammar& servant) {
  if (!classifyANF(master).violations.empty())
    throw MatchError("globalResolution: the reference grammar is not in "
                     "abstract normal form");
  if (!classifyANF(servant).violations.empty())
    throw MatchError("globalResolution: the servant grammar is not in "
                     "abstract normal form");
  Search search(master, servant);
  SearchState seed;
  const std::string& sRoot = servant.roots().front();
  const std::string& mRoot = master.roots().front();
  Search::extend(seed, sRoot, mRoot);
  search.deepestPartial.pairs.push_back({sRoot, mRoot});
  search.dfs(std::move(seed));

  if (search.first) {
    GlobalMatch gm;
    for (const auto& [a, b] : *search.first)
      gm.resolution.pairs.push_back({a, b});
    gm.alternatives = search.found.size() - 1;
    return gm;
  }
  MatchFailure mf;
  mf.partial = std::move(search.deepestPartial);
  mf.frontier = std::move(search.frontier);
  mf.reason = std::move(search.reason);
  return mf;
}

}  // namespace gcv
