#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "stutterkit/lasso.hpp"
#include "stutterkit/limits.hpp"

namespace stutterkit {

// Guards are sets of letters (total valuations of the automaton's ap),
// stored as a bitset: bit v = the valuation with atom i true iff bit i of v.
// At most 6 atomic propositions per automaton (64 letters).
using Guard = std::uint64_t;
using MarkSet = std::uint32_t;

constexpr std::size_t kMaxAp = 6;
constexpr std::uint32_t kMaxMarks = 30;

struct TgbaEdge {
  std::uint32_t src = 0, dst = 0;
  Guard guard = 0;     // nonempty (unsatisfiable edges are pruned)
  MarkSet marks = 0;   // subset of {0..k-1}
};

// Transition-based generalized Büchi automaton: a run is accepting iff every
// mark in {0..k-1} occurs infinitely often on its edges; k = 0 means every
// infinite run is accepting.
struct Tgba {
  std::vector<std::string> ap;
  std::uint32_t num_states = 0;
  std::uint32_t initial = 0;
  std::uint32_t acceptance_count = 0;
  std::vector<TgbaEdge> edges;

  std::uint32_t num_letters() const { return 1u << ap.size(); }
  Guard full_guard() const {
    std::uint32_t n = num_letters();
    return n >= 64 ? ~Guard(0) : (Guard(1) << n) - 1;
  }
  MarkSet all_marks() const {
    return acceptance_count >= 32 ? ~MarkSet(0) : (MarkSet(1) << acceptance_count) - 1;
  }
  std::vector<std::vector<std::uint32_t>> out_index() const;  // state -> edge ids
};

using LassoWitness = LassoWord;

// One-state automaton accepting every word over `ap`.
Tgba universal_tgba(const std::vector<std::string>& ap);
// One-state automaton with the empty language.
Tgba empty_tgba(const std::vector<std::string>& ap);
// Automaton whose language is exactly {w}.
Tgba lasso_automaton(const LassoWord& w);

// If k = 0, switch to k = 1 with every edge marked (same language).
Tgba ensure_marked(const Tgba& a);

// Reindex `a` over a superset atom list (guards expanded accordingly).
Tgba extend_ap(const Tgba& a, const std::vector<std::string>& new_ap);
// Deterministic union: a.ap then the atoms of b.ap not in a.ap.
std::vector<std::string> ap_union(const std::vector<std::string>& a,
                                  const std::vector<std::string>& b);

// Synchronous product: L(result) = L(a) ∩ L(b); marks of a first, b's
// shifted by a.acceptance_count.
Tgba product(const Tgba& a, const Tgba& b, const ExecLimits& lim = {});

// Disjoint union: L(result) = L(a) ∪ L(b).  Both sides are degeneralized, so
// the result has acceptance_count = 1.
Tgba tgba_union(const Tgba& a, const Tgba& b);

// SCC-based emptiness; on nonempty returns a lasso accepted by `a`.
std::pair<bool, std::optional<LassoWitness>> is_empty_with_witness(const Tgba& a);
bool is_empty(const Tgba& a);

// Membership of the ultimately periodic word stem·loop^ω; w's atom list must
// cover a.ap.
bool accepts_lasso(const Tgba& a, const LassoWord& w);

// Repeated membership queries against one automaton.  Acceptance of
// stem·loop^ω depends only on the loop and on the state set reached on the
// stem, so each query is a subset simulation plus one memoized
// accepting-cycle analysis per (loop, state set).  Automata wider than 64
// states fall back to accepts_lasso per query.  Same word contract as
// accepts_lasso; the automaton must outlive the tester.
class LassoMembership {
 public:
  explicit LassoMembership(const Tgba& a);
  bool accepts(const LassoWord& w);

 private:
  std::uint64_t step(std::uint64_t r, Valuation v) const;
  bool loop_accepts(const std::vector<Valuation>& loop, std::uint64_t r) const;

  const Tgba& a_;
  bool wide_;
  Valuation sigma_ = 0;
  std::vector<std::vector<std::uint64_t>> succ_;  // [state][letter] -> dst mask
  std::vector<std::vector<std::uint32_t>> out_;   // state -> edge ids
  std::unordered_map<std::string, bool> memo_;
};

// Language-preserving reduction to acceptance_count = 1.
Tgba degeneralize(const Tgba& a);

// Drop states that are unreachable or cannot reach an accepting cycle.
// The canonical empty automaton (one state, no edges) results when the
// language is empty.
Tgba trim(const Tgba& a);

// Drop redundant acceptance marks (those implied by another mark's edge set
// and those carried by every edge); language preserved.  Products and
// closures pile up marks, and fewer marks mean cheaper degeneralization.
Tgba reduce_marks(const Tgba& a);

// Quotient by forward bisimulation (letter/marks/class-respecting); language
// preserved.
Tgba bisim_quotient(const Tgba& a);

}  // namespace stutterkit
