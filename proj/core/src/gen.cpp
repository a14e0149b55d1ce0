#include "stutterkit/gen.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <string>
#include <vector>

#include "stutterkit/kripke.hpp"

namespace stutterkit {

std::uint64_t corpus_seed(std::uint64_t fallback) {
  if (const char* s = std::getenv("STUTTERKIT_SEED"))
    if (*s) return std::strtoull(s, nullptr, 10);
  return fallback;
}

Ltl random_formula(std::mt19937_64& rng, int depth, int num_atoms) {
  assert(num_atoms >= 1 && num_atoms <= 3);
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 9);
  std::uniform_int_distribution<int> atom(0, num_atoms - 1);
  const char* names[] = {"p", "q", "r"};
  switch (pick(rng)) {
    case 0: return Ltl::atom(names[atom(rng)]);
    case 1: return atom(rng) == 0 ? Ltl::tt() : Ltl::atom(names[atom(rng)]);
    case 2: return Ltl::make_not(random_formula(rng, depth - 1, num_atoms));
    case 3: return Ltl::make_next(random_formula(rng, depth - 1, num_atoms));
    case 4: return Ltl::make_eventually(random_formula(rng, depth - 1, num_atoms));
    case 5: return Ltl::make_globally(random_formula(rng, depth - 1, num_atoms));
    case 6:
      return Ltl::make_and(random_formula(rng, depth - 1, num_atoms),
                           random_formula(rng, depth - 1, num_atoms));
    case 7:
      return Ltl::make_or(random_formula(rng, depth - 1, num_atoms),
                          random_formula(rng, depth - 1, num_atoms));
    case 8:
      return Ltl::make_until(random_formula(rng, depth - 1, num_atoms),
                             random_formula(rng, depth - 1, num_atoms));
    default:
      return Ltl::make_release(random_formula(rng, depth - 1, num_atoms),
                               random_formula(rng, depth - 1, num_atoms));
  }
}

namespace {

PredPtr place_nonzero(const std::string& place) {
  auto p = std::make_shared<Pred>();
  p->kind = Pred::Kind::Cmp;
  p->lhs.terms.push_back({1, place});
  p->op = CmpOp::Gt;
  return p;  // rhs defaults to the constant 0
}

}  // namespace

RandomNet random_net(std::mt19937_64& rng) {
  auto pick = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  for (;;) {
    const int n_obs = 3;
    const int n_hidden = pick(1, 5);
    const int np = n_obs + n_hidden;

    // Gadget plan: a post chain needs one reserved hidden buffer; a pre chain
    // additionally needs a hidden source place that no base transition may
    // consume from (quasi-persistence of the feeder).
    int gadget = pick(0, 2);  // 0 = none, 1 = post, 2 = pre
    if (gadget == 2 && n_hidden < 2) gadget = 1;
    const int buffer = gadget ? np - 1 : -1;
    const int source = gadget == 2 ? np - 2 : -1;

    PetriNet net;
    for (int i = 0; i < n_obs; ++i) net.places.push_back("o" + std::to_string(i));
    for (int i = 0; i < n_hidden; ++i) net.places.push_back("h" + std::to_string(i));

    std::vector<std::vector<std::uint32_t>> ins, outs;
    auto draw_places = [&](int count, bool allow_source) {
      std::vector<std::uint32_t> chosen;
      while (static_cast<int>(chosen.size()) < count) {
        int p = pick(0, np - 1);
        if (p == buffer) continue;
        if (!allow_source && p == source) continue;
        if (std::find(chosen.begin(), chosen.end(), static_cast<std::uint32_t>(p)) !=
            chosen.end())
          continue;
        chosen.push_back(static_cast<std::uint32_t>(p));
      }
      return chosen;
    };

    const int n_base = pick(2, 5);
    for (int t = 0; t < n_base; ++t) {
      ins.push_back(draw_places(pick(1, 2), false));
      outs.push_back(draw_places(pick(0, 2), true));
    }
    if (gadget == 1) {
      // Feeder of any shape into the buffer, then an invisible single-input
      // consumer draining it into hidden space (or nowhere).
      ins.push_back(draw_places(1, true));
      outs.push_back({static_cast<std::uint32_t>(buffer)});
      ins.push_back({static_cast<std::uint32_t>(buffer)});
      std::vector<std::uint32_t> drain;
      if (n_hidden >= 2 && pick(0, 1)) drain.push_back(n_obs + pick(0, n_hidden - 2));
      outs.push_back(std::move(drain));
    } else if (gadget == 2) {
      // Invisible feeder source -> buffer (single output, net-consuming, and
      // quasi-persistent because nothing else consumes source), then an
      // arbitrary consumer of the buffer.
      ins.push_back({static_cast<std::uint32_t>(source)});
      outs.push_back({static_cast<std::uint32_t>(buffer)});
      ins.push_back({static_cast<std::uint32_t>(buffer)});
      outs.push_back(draw_places(pick(0, 2) ? 1 : 0, true));
    }

    const int nt = static_cast<int>(ins.size());
    for (int t = 0; t < nt; ++t) net.transitions.push_back("t" + std::to_string(t));
    net.w_minus.assign(np, std::vector<std::uint32_t>(nt, 0));
    net.w_plus.assign(np, std::vector<std::uint32_t>(nt, 0));
    for (int t = 0; t < nt; ++t) {
      for (std::uint32_t p : ins[t]) net.w_minus[p][t] = 1;
      for (std::uint32_t p : outs[t]) net.w_plus[p][t] = 1;
    }

    net.m0.assign(np, 0);
    for (int p = 0; p < np; ++p) {
      if (p == buffer) continue;  // agglomeration needs it initially empty
      net.m0[p] = p == source ? 1 : pick(0, 2);
    }
    bool live = false;
    for (int t = 0; t < nt && !live; ++t) {
      live = true;
      for (std::uint32_t p : ins[t])
        if (!net.m0[p]) live = false;
    }
    if (!live) net.m0[ins[0][0]] = 1;  // base inputs never include the buffer

    RandomNet r;
    r.net = std::move(net);
    for (int i = 0; i < n_obs; ++i)
      r.binding.atoms[std::string(1, "pqr"[i])] = place_nonzero("o" + std::to_string(i));

    try {
      build_kripke(r.net, r.binding, 5000);  // reject unbounded or huge draws
      return r;
    } catch (const resource_error&) {
    }
  }
}

}  // namespace stutterkit
