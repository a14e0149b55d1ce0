#include "stutterkit/kripke.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace stutterkit {

KripkeGraph build_kripke(const PetriNet& net, const PropertyBinding& binding,
                         std::uint32_t state_cap) {
  KripkeGraph g;
  std::vector<CompiledPred> preds;
  for (const auto& [name, pred] : binding.atoms) {  // map order: sorted names
    g.ap.push_back(name);
    preds.push_back(compile_pred(*pred, net));
  }
  if (g.ap.size() > kMaxAp)
    throw resource_error("too many atoms for the automaton view");

  auto label_of = [&](const Marking& m) {
    Valuation v = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
      if (preds[i].eval(m)) v |= Valuation(1) << i;
    return v;
  };

  std::map<Marking, std::uint32_t> ix;
  std::deque<std::uint32_t> todo;
  auto intern = [&](const Marking& m) {
    auto [it, fresh] = ix.emplace(m, static_cast<std::uint32_t>(g.states.size()));
    if (fresh) {
      if (g.states.size() >= state_cap)
        throw resource_error("state cap exceeded in build_kripke: net may be unbounded");
      g.states.push_back(m);
      g.labels.push_back(label_of(m));
      todo.push_back(it->second);
    }
    return it->second;
  };

  g.initial = intern(net.m0);
  while (!todo.empty()) {
    std::uint32_t s = todo.front();
    todo.pop_front();
    const Marking m = g.states[s];
    std::set<std::uint32_t> succ;
    for (std::uint32_t t = 0; t < net.num_transitions(); ++t)
      if (net.enabled(m, t)) succ.insert(intern(net.fire(m, t)));
    if (succ.empty()) succ.insert(s);  // deadlock: stay forever
    g.edges.resize(g.states.size());
    g.edges[s].assign(succ.begin(), succ.end());
  }
  g.edges.resize(g.states.size());
  return g;
}

Tgba kripke_to_tgba(const KripkeGraph& k) {
  Tgba a;
  a.ap = k.ap;
  a.num_states = static_cast<std::uint32_t>(k.states.size()) + 1;
  a.initial = 0;
  a.acceptance_count = 0;
  a.edges.push_back({0, k.initial + 1, Guard(1) << k.labels[k.initial], 0});
  for (std::uint32_t s = 0; s < k.states.size(); ++s)
    for (std::uint32_t d : k.edges[s])
      a.edges.push_back({s + 1, d + 1, Guard(1) << k.labels[d], 0});
  std::stable_sort(a.edges.begin(), a.edges.end(),
                   [](const TgbaEdge& x, const TgbaEdge& y) { return x.src < y.src; });
  return a;
}

}  // namespace stutterkit
