#include "gcv/converge.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gcv/gin.hpp"

namespace gcv {

namespace {

struct Atom {
  std::string name;
  ExprKind deco;  // Nonterminal for bare, else Optional/Star/Plus

  bool operator==(const Atom&) const = default;
};

ExprKind blur(ExprKind k) {
  return k == ExprKind::Plus ? ExprKind::Star : k;
}

std::optional<Atom> atomOf(const Expr& e) {
  if (e.kind() == ExprKind::Nonterminal) return Atom{e.atom(), e.kind()};
  if (e.kind() == ExprKind::Optional || e.kind() == ExprKind::Star ||
      e.kind() == ExprKind::Plus) {
    const Expr& body = e.children().front();
    if (body.kind() == ExprKind::Nonterminal)
      return Atom{body.atom(), e.kind()};
  }
  return std::nullopt;
}

std::optional<std::vector<Atom>> atomsOf(const Expr& rhs) {
  std::vector<Atom> out;
  if (rhs.kind() == ExprKind::Sequence) {
    for (const auto& c : rhs.children()) {
      auto a = atomOf(c);
      if (!a) return std::nullopt;
      out.push_back(std::move(*a));
    }
    return out;
  }
  auto a = atomOf(rhs);
  if (!a) return std::nullopt;
  out.push_back(std::move(*a));
  return out;
}

[[noreturn]] void structFail(const Grammar& master, const Grammar& servant,
                             const std::string& n, const std::string& why) {
  std::string msg = "'" + n + "': " + why;
  auto dump = [&](const char* side, const Grammar& g) {
    msg += "\n  " + std::string(side) + ":";
    if (!g.nonterminals().count(n)) {
      msg += " (absent)";
      return;
    }
    for (auto i : productionIndicesOf(g, n))
      msg += "\n    " + printExpr(g.productions()[i].rhs);
  };
  dump("reference", master);
  dump("servant", servant);
  throw StructError(msg);
}

}  // namespace

Trace structuralResolve(const Grammar& masterAnf,
                        const Grammar& servantRenamed) {
  Grammar servant = servantRenamed;
  Trace trace;
  auto apply = [&](const Step& s) {
    auto [next, recorded] = applyForwardRecording(servant, s);
    servant = std::move(next);
    trace.push_back(std::move(recorded));
  };

  if (masterAnf.nonterminals() != servant.nonterminals())
    throw StructError(
        "vocabularies differ; nominal resolution must run first");

  for (const auto& name : masterAnf.nonterminals()) {
    auto mIdx = productionIndicesOf(masterAnf, name);
    auto sIdx = productionIndicesOf(servant, name);
    if (mIdx.size() != sIdx.size())
      structFail(masterAnf, servant, name,
                 "rule counts differ (" + std::to_string(mIdx.size()) +
                     " vs " + std::to_string(sIdx.size()) + ")");
    if (mIdx.empty()) continue;

    if (mIdx.size() > 1) {
      // chain groups: same alternatives, order irrelevant
      std::multiset<std::string> mt, st;
      for (auto i : mIdx) {
        const Expr& rhs = masterAnf.productions()[i].rhs;
        if (rhs.kind() != ExprKind::Nonterminal)
          structFail(masterAnf, servant, name, "reference side is not a chain group");
        mt.insert(rhs.atom());
      }
      for (auto i : sIdx) {
        const Expr& rhs = servant.productions()[i].rhs;
        if (rhs.kind() != ExprKind::Nonterminal)
          structFail(masterAnf, servant, name, "servant side is not a chain group");
        st.insert(rhs.atom());
      }
      if (mt != st)
        structFail(masterAnf, servant, name, "chain alternatives differ");
      continue;
    }

    auto mAtoms = atomsOf(masterAnf.productions()[mIdx[0]].rhs);
    auto sAtoms = atomsOf(servant.productions()[sIdx[0]].rhs);
    if (!mAtoms || !sAtoms)
      structFail(masterAnf, servant, name,
                 "rule is not a sequence of decorated nonterminals");
    if (mAtoms->size() != sAtoms->size())
      structFail(masterAnf, servant, name,
                 "sequences have different lengths");

    // Pair servant atoms with reference atoms: exact matches first, then
    // repetition-blurred ones (those need a widen or narrow).
    std::size_t k = sAtoms->size();
    std::vector<int> pairOf(k, -1);  // servant slot -> reference slot
    std::vector<bool> used(k, false);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        if (used[j] || (*sAtoms)[i] != (*mAtoms)[j]) continue;
        pairOf[i] = static_cast<int>(j);
        used[j] = true;
        break;
      }
    for (std::size_t i = 0; i < k; ++i) {
      if (pairOf[i] != -1) continue;
      const Atom& sa = (*sAtoms)[i];
      for (std::size_t j = 0; j < k; ++j) {
        const Atom& ma = (*mAtoms)[j];
        if (used[j] || sa.name != ma.name || blur(sa.deco) != blur(ma.deco))
          continue;
        pairOf[i] = static_cast<int>(j);
        used[j] = true;
        Path at = k == 1 ? Path{} : Path{static_cast<int>(i)};
        apply(WidenStep{sa.deco == ExprKind::Plus, name, 1, at});
        break;
      }
      if (pairOf[i] == -1)
        structFail(masterAnf, servant, name,
                   "no counterpart for '" + sa.name + "' at position " +
                       std::to_string(i + 1));
    }

    bool ordered = true;
    for (std::size_t i = 0; i < k; ++i)
      if (pairOf[i] != static_cast<int>(i)) ordered = false;
    if (!ordered) {
      std::vector<int> order(k);
      for (std::size_t i = 0; i < k; ++i)
        order[static_cast<std::size_t>(pairOf[i])] = static_cast<int>(i) + 1;
      apply(PermuteStep{name, std::move(order)});
    }
  }
  return trace;
}

bool verifyConverged(const Grammar& masterAnf, const Grammar& servantFinal) {
  if (masterAnf.nonterminals() != servantFinal.nonterminals()) return false;
  if (masterAnf.roots() != servantFinal.roots()) return false;
  auto mp = masterAnf.productions();
  auto sp = servantFinal.productions();
  std::sort(mp.begin(), mp.end());
  std::sort(sp.begin(), sp.end());
  return mp == sp;
}

namespace {

std::string freshTmp(const Grammar& g,
                     const std::map<std::string, std::string>& pending) {
  for (int k = 1;; ++k) {
    std::string candidate = "tmp_" + std::to_string(k);
    if (g.nonterminals().count(candidate)) continue;
    bool taken = false;
    for (const auto& [from, to] : pending)
      if (to == candidate) taken = true;
    if (!taken) return candidate;
  }
}

// Applies every differing (servant -> reference) pair as rename steps,
// bridging swap cycles through a temporary name.
void applyRenames(Grammar& g, const NominalResolution& res, Trace& trace) {
  std::map<std::string, std::string> pending;
  for (const auto& p : res.pairs)
    if (p.left && p.right && *p.left != *p.right) pending[*p.left] = *p.right;

  auto apply = [&](const std::string& from, const std::string& to) {
    auto [next, recorded] = applyForwardRecording(g, RenameStep{from, to});
    g = std::move(next);
    trace.push_back(std::move(recorded));
  };

  while (!pending.empty()) {
    bool progressed = false;
    for (auto it = pending.begin(); it != pending.end(); ++it) {
      if (g.nonterminals().count(it->second)) continue;
      apply(it->first, it->second);
      pending.erase(it);
      progressed = true;
      break;
    }
    if (progressed) continue;
    // every pending target is occupied: break the first cycle with a bridge
    auto it = pending.begin();
    std::string tmp = freshTmp(g, pending);
    std::string target = it->second;
    apply(it->first, tmp);
    pending.erase(it);
    pending.emplace(tmp, target);
  }
}

}  // namespace

ConvergenceResult converge(const Grammar& master, const Grammar& servant,
                           const std::string& servantName) {
  ConvergenceResult result;
  result.servantName = servantName;

  NormalizationResult masterNorm = normalize(master);
  result.masterAnf = masterNorm.normalized;
  result.masterAnfTrace = std::move(masterNorm.trace);

  auto fail = [&](std::string reason) {
    result.verdict = {false, std::move(reason)};
    return result;
  };

  Grammar mutated = servant;
  try {
    auto [g, trace] = mutateForConvergence(servant);
    mutated = std::move(g);
    result.mutationTrace = std::move(trace);
  } catch (const TransformError& e) {
    result.servantFinal = servant;
    return fail(std::string("mutation failed: ") + e.what());
  }

  Grammar servantAnf;
  try {
    NormalizationResult norm = normalize(mutated);
    servantAnf = std::move(norm.normalized);
    result.servantAnfTrace = std::move(norm.trace);
  } catch (const NormalizeError& e) {
    result.servantFinal = mutated;
    return fail(std::string("normalization failed: ") + e.what());
  }
  result.servantFinal = servantAnf;

  MatchResult match = globalResolution(result.masterAnf, servantAnf);
  if (auto* failure = std::get_if<MatchFailure>(&match)) {
    result.resolution = failure->partial;
    result.frontier = failure->frontier;
    std::string reason = "no vocabulary correspondence: " + failure->reason;
    if (failure->frontier)
      reason += " (while matching '" + failure->frontier->first + "' against '" +
                failure->frontier->second + "')";
    return fail(std::move(reason));
  }
  auto& hit = std::get<GlobalMatch>(match);
  result.resolution = hit.resolution;
  result.alternatives = hit.alternatives;

  Grammar renamed = servantAnf;
  applyRenames(renamed, result.resolution, result.renameTrace);
  result.servantFinal = renamed;

  try {
    result.structuralTrace = structuralResolve(result.masterAnf, renamed);
  } catch (const StructError& e) {
    return fail(std::string("structural resolution failed: ") + e.what());
  }
  result.servantFinal =
      applyTrace(renamed, result.structuralTrace, Direction::Forward);

  if (!verifyConverged(result.masterAnf, result.servantFinal))
    return fail("alignment finished but the grammars still differ");
  result.verdict = {true, ""};
  return result;
}

}  // namespace gcv
