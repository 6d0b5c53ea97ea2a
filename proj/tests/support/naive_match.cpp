#include "naive_match.hpp"

#include <algorithm>
#include <numeric>

#include "gcv/prodsig.hpp"

namespace gcv::testsupport {
namespace {

// does production p, read through the name map, carry the signature of q?
bool sameSigUnder(const std::map<std::string, std::string>& m,
                  const Production& p, const Production& q) {
  ProdSig sp = prodsig(p);
  ProdSig sq = prodsig(q);
  if (sp.size() != sq.size()) return false;
  for (const auto& [name, fp] : sp) {
    auto it = m.find(name);
    if (it == m.end()) return false;
    auto jt = sq.find(it->second);
    if (jt == sq.end() || !footprintEquiv(fp, jt->second)) return false;
  }
  return true;
}

bool productionsPairUnder(const std::map<std::string, std::string>& m,
                          const std::vector<Production>& ps,
                          const std::vector<Production>& qs) {
  if (ps.size() != qs.size()) return false;
  std::vector<std::size_t> idx(qs.size());
  std::iota(idx.begin(), idx.end(), 0u);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < ps.size() && ok; ++i)
      ok = sameSigUnder(m, ps[i], qs[idx[i]]);
    if (ok) return true;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return false;
}

}  // namespace

std::vector<std::map<std::string, std::string>> naiveMatches(
    const Grammar& master, const Grammar& servant) {
  std::vector<std::map<std::string, std::string>> out;
  const auto& ns = servant.nonterminals();
  const auto& nm = master.nonterminals();
  if (ns.size() != nm.size()) return out;
  if (master.roots().size() != 1 || servant.roots().size() != 1) return out;

  std::vector<std::string> vs(ns.begin(), ns.end());
  std::vector<std::string> vm(nm.begin(), nm.end());
  std::vector<std::size_t> idx(vm.size());
  std::iota(idx.begin(), idx.end(), 0u);
  do {
    std::map<std::string, std::string> m;
    for (std::size_t i = 0; i < vs.size(); ++i) m[vs[i]] = vm[idx[i]];
    if (m[servant.roots().front()] != master.roots().front()) continue;
    bool ok = true;
    for (const auto& name : vs) {
      if (!productionsPairUnder(m, productionsOf(servant, name),
                                productionsOf(master, m.at(name)))) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(std::move(m));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

}  // namespace gcv::testsupport
