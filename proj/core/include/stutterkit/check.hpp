#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "stutterkit/kripke.hpp"
#include "stutterkit/lasso.hpp"
#include "stutterkit/limits.hpp"
#include "stutterkit/ltl.hpp"
#include "stutterkit/petri.hpp"
#include "stutterkit/stutter.hpp"

namespace stutterkit {

struct CheckSettings {
  ExecLimits lim;
  double classify_timeout_s = 15.0;  // cutoff for the classification stage only
};

struct Verdict {
  enum class Outcome { Holds, Violated, Unknown };
  Outcome outcome = Outcome::Unknown;
  bool trusted = false;
  std::string procedure;  // which stage produced the verdict
  std::optional<LassoWitness> witness;           // present on violated
  std::optional<SensitivityClass> sensitivity;   // absent if classification failed
  std::optional<ReductionStats> reduction_stats; // absent when nothing was reduced
  std::uint64_t states_explored = 0;             // summed over deciding products
  double wall_ms = 0;
};

const char* to_string(Verdict::Outcome o);
nlohmann::ordered_json verdict_json(const Verdict& v);

// Semi-decision procedure: classify f, abort untrusted on LS; otherwise
// reduce the net observing only f's atoms and check the product of
// translate(!f) with the reduced state space.  The verdict is trusted when
// the emptiness answer transfers to the original system:
//   empty   + f in {SI, LI}  => holds, trusted
//   nonempty + f in {SI, ShI} => violated, trusted
// (Emptiness transfers along the *negation*: reduced runs are shortenings of
// original runs, so an empty product proves holds only if L(!f) is closed
// under shortening of counterexamples — i.e. f is LI — and a reduced
// counterexample lifts to an original one only if L(!f) is closed under
// lengthening — i.e. f is ShI.)
Verdict semi_decide(const PetriNet& net, const PropertyBinding& binding, const Ltl& f,
                    const CheckSettings& settings = {});

// Closure-extension check, valid for arbitrary f: if
// cl(translate(!f)) x reduced-KS is empty, then f holds on the original
// system (every original counterexample would leave a shortening in the
// reduced product).  Returns nothing when the product is nonempty.
std::optional<Verdict> cl_extension_check(const PetriNet& net,
                                          const PropertyBinding& binding, const Ltl& f,
                                          const CheckSettings& settings = {});

// Partition-based procedure: optimistic reduced product; trusted semi verdict
// if the class allows; otherwise confirm an empty product via the closure
// extension, or a nonempty one via the lengthening-insensitive parts of
// L(!f); finally fall back to deciding the stutter-insensitive part on the
// reduced system and the remaining parts on the original.  Always returns a
// trusted verdict unless a resource limit stops the final fallback.
Verdict revisited_decide(const PetriNet& net, const PropertyBinding& binding,
                         const Ltl& f, const CheckSettings& settings = {});

// Baseline: full product of translate(!f) with the unreduced state space.
// Returns (holds, witness-if-violated).
std::pair<bool, std::optional<LassoWitness>> ground_truth_check(
    const PetriNet& net, const PropertyBinding& binding, const Ltl& f,
    const CheckSettings& settings = {});

}  // namespace stutterkit
