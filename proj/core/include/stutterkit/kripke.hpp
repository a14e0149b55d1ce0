#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stutterkit/lasso.hpp"
#include "stutterkit/petri.hpp"
#include "stutterkit/tgba.hpp"

namespace stutterkit {

// Explicit reachability graph of a net, labeled by the binding's atoms
// (sorted by name; label bit i = truth of ap[i]).  Deadlock markings carry a
// self-loop so every maximal path is infinite.
struct KripkeGraph {
  std::vector<std::string> ap;
  std::vector<Marking> states;  // BFS order, deduplicated
  std::uint32_t initial = 0;
  std::vector<std::vector<std::uint32_t>> edges;  // sorted successor ids
  std::vector<Valuation> labels;
};

// BFS over reachable markings; throws resource_error past state_cap (the net
// may be unbounded).
KripkeGraph build_kripke(const PetriNet& net, const PropertyBinding& binding,
                         std::uint32_t state_cap);

// Automaton view for products: a pre-initial state emits the initial state's
// label as the first letter, every edge is guarded by exactly the
// destination's label, and every run is accepting (k = 0).
Tgba kripke_to_tgba(const KripkeGraph& k);

}  // namespace stutterkit
