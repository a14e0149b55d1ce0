#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stutterkit/limits.hpp"

namespace stutterkit {

using Marking = std::vector<std::uint32_t>;

// Place/transition net with natural-number arc weights; w_minus[p][t] tokens
// consumed from p when t fires, w_plus[p][t] tokens produced.
struct PetriNet {
  std::vector<std::string> places;
  std::vector<std::string> transitions;
  std::vector<std::vector<std::uint32_t>> w_minus;  // [place][transition]
  std::vector<std::vector<std::uint32_t>> w_plus;   // [place][transition]
  Marking m0;

  std::uint32_t num_places() const { return static_cast<std::uint32_t>(places.size()); }
  std::uint32_t num_transitions() const {
    return static_cast<std::uint32_t>(transitions.size());
  }
  // Transitions consuming from / producing into p (ascending).
  std::vector<std::uint32_t> consumers(std::uint32_t p) const;
  std::vector<std::uint32_t> feeders(std::uint32_t p) const;
  bool enabled(const Marking& m, std::uint32_t t) const;
  Marking fire(const Marking& m, std::uint32_t t) const;
};

// Marking predicates bound to atom names.  Places are referenced by name so a
// binding stays valid across net reductions (support places are never
// removed).
struct LinTerm {
  std::int64_t coef = 1;
  std::string place;
};
struct LinExpr {
  std::vector<LinTerm> terms;
  std::int64_t constant = 0;
};
enum class CmpOp { Lt, Le, Eq, Ge, Gt };

struct Pred;
using PredPtr = std::shared_ptr<const Pred>;
struct Pred {
  enum class Kind { Cmp, And, Or, Not };
  Kind kind = Kind::Cmp;
  LinExpr lhs, rhs;  // Cmp
  CmpOp op = CmpOp::Eq;
  PredPtr a, b;  // And/Or both, Not only a
};

struct PropertyBinding {
  std::map<std::string, PredPtr> atoms;
};

// Evaluate a predicate on a marking of `net` (place names resolved per call;
// see CompiledPred for the hot path).
bool eval_pred(const Pred& pred, const PetriNet& net, const Marking& m);

// Name-resolved form for repeated evaluation over one net.
struct CompiledPred {
  Pred::Kind kind = Pred::Kind::Cmp;
  std::vector<std::pair<std::int64_t, std::uint32_t>> lhs_terms, rhs_terms;
  std::int64_t lhs_const = 0, rhs_const = 0;
  CmpOp op = CmpOp::Eq;
  std::shared_ptr<const CompiledPred> a, b;

  bool eval(const Marking& m) const;
};
CompiledPred compile_pred(const Pred& pred, const PetriNet& net);

// Parses the line-oriented net description (place/trans/atom lines, `#`
// comments); a text starting with '<' is treated as PNML instead (no atoms).
std::pair<PetriNet, PropertyBinding> parse_net(const std::string& text);

// PNML place/transition subset: places, transitions, integer-inscribed arcs,
// initial markings.  Anything else is rejected with a diagnostic.
PetriNet parse_pnml(const std::string& text);

// Inverse of parse_net: the line-oriented format, atom bindings included.
std::string write_net(const PetriNet& net, const PropertyBinding& binding);

// Support = places with a nonzero coefficient in some atom; invisible
// transitions have equal pre/post weight on every support place.
std::pair<std::set<std::uint32_t>, std::set<std::uint32_t>> support_and_invisibles(
    const PetriNet& net, const PropertyBinding& binding);

enum class AggloKind { Pre, Post };
const char* to_string(AggloKind k);

struct AggloCandidate {
  std::uint32_t place = 0;
  AggloKind kind = AggloKind::Pre;
};

// Per-condition result of testing place p for agglomeration; every condition
// is reported independently for diagnostics.
struct AggloCheck {
  // shared conditions
  bool not_in_support = false;
  bool initially_unmarked = false;
  bool has_feeders = false;
  bool has_consumers = false;
  bool feeders_consumers_distinct = false;  // •p ∩ p• = ∅
  bool feeders_single_token = false;        // every h ∈ •p has w_plus[p][h] = 1
  bool consumers_single_token = false;      // every f ∈ p• has w_minus[p][f] = 1
  // pre-agglomeration conditions on every feeder h
  bool feeders_invisible = false;
  bool feeders_single_output = false;    // p is h's only output place
  bool feeders_divergent_free = false;   // some input of h is consumed net
  bool feeders_quasi_persistent = false; // every input place of h feeds only h
  // post-agglomeration conditions on every consumer f
  bool consumers_invisible = false;
  bool consumers_single_input = false;  // p is f's only input place

  bool shared_ok() const;
  bool ok(AggloKind k) const;
  // Name of the first failed condition for `k`, or "" when ok.
  std::string first_failure(AggloKind k) const;
};

AggloCheck check_agglomeration(const PetriNet& net, std::uint32_t p,
                               const std::set<std::uint32_t>& support,
                               const std::set<std::uint32_t>& invisibles);

std::vector<AggloCandidate> find_agglomerations(const PetriNet& net,
                                                const std::set<std::uint32_t>& support,
                                                const std::set<std::uint32_t>& invisibles);

// Removes p, •p and p•, adding one fused transition "h.f" per
// (h, f) ∈ •p × p• with summed weight vectors (the weight on p cancels).
// Re-validates the conditions and throws std::invalid_argument naming the
// first failed one.
PetriNet agglomerate(const PetriNet& net, std::uint32_t p, AggloKind kind,
                     const std::set<std::uint32_t>& support,
                     const std::set<std::uint32_t>& invisibles);

struct ReductionStats {
  std::int64_t places_removed = 0;
  std::int64_t transitions_removed = 0;  // net change; fusions can add more than they remove
  std::int64_t agglomerations = 0;
};

// Applies agglomerations to a fixed point: post rules first, then pre, each
// by ascending place index, recomputing candidates after every application.
std::pair<PetriNet, ReductionStats> reduce_fixpoint(const PetriNet& net,
                                                    const PropertyBinding& binding);

}  // namespace stutterkit
