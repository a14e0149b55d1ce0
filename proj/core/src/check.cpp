#include "stutterkit/check.hpp"

#include <chrono>
#include <stdexcept>

#include "stutterkit/complement.hpp"
#include "stutterkit/translate.hpp"

namespace stutterkit {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Tgba simp(Tgba a) { return bisim_quotient(reduce_marks(trim(std::move(a)))); }

// Binding restricted to the formula's atoms: those are the observed
// propositions, everything else is invisible to the reduction.
PropertyBinding restrict_binding(const PropertyBinding& binding, const Ltl& f) {
  PropertyBinding r;
  for (const std::string& name : atoms_of(f)) {
    auto it = binding.atoms.find(name);
    if (it == binding.atoms.end())
      throw std::invalid_argument("atom '" + name + "' is not bound by the net");
    r.atoms.emplace(name, it->second);
  }
  return r;
}

std::optional<SensitivityClass> try_classify(const Ltl& f, const CheckSettings& s) {
  ExecLimits lim = s.lim;
  auto cutoff = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                   std::chrono::duration<double>(s.classify_timeout_s));
  if (!lim.deadline || *lim.deadline > cutoff) lim.deadline = cutoff;
  try {
    return classify_sensitivity(f, lim);
  } catch (const resource_error&) {
    return std::nullopt;
  }
}

struct Prepared {
  PropertyBinding rb;         // binding over f's atoms only
  PetriNet rnet;              // reduced net
  ReductionStats stats;
  Tgba kt;                    // reduced state space as TGBA
  Tgba neg;                   // translate(!f), simplified
};

Prepared prepare_reduced(const PetriNet& net, const PropertyBinding& binding,
                         const Ltl& f, const CheckSettings& s) {
  Prepared p;
  p.rb = restrict_binding(binding, f);
  auto [rnet, stats] = reduce_fixpoint(net, p.rb);
  p.rnet = std::move(rnet);
  p.stats = stats;
  p.kt = kripke_to_tgba(build_kripke(p.rnet, p.rb, s.lim.state_cap));
  p.neg = simp(translate(negate_to_nnf(f), s.lim));
  return p;
}

// The lengthening-insensitive portion of L(!f): the union of the SI and SI+
// parts, built directly as  A \ (A ⊗ cl(sl(A) ⊗ Af))  where A = translate(!f)
// and Af = translate(f).  A word of this language found in the reduced state
// space lifts to a counterexample of the original system.
Tgba lengthening_part_of_negation(const Tgba& neg, const Ltl& f, const ExecLimits& lim) {
  Tgba af = simp(translate(to_nnf(f), lim));
  Tgba cp = simp(product(simp(selfloop_sl(neg, lim)), af, lim));
  Tgba dp = simp(closure_cl(cp, lim));
  return simp(product_with_complement(neg, dp, lim));
}

}  // namespace

const char* to_string(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::Holds: return "holds";
    case Verdict::Outcome::Violated: return "violated";
    case Verdict::Outcome::Unknown: return "unknown";
  }
  return "unknown";
}

nlohmann::ordered_json verdict_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["outcome"] = to_string(v.outcome);
  j["trusted"] = v.trusted;
  j["procedure"] = v.procedure;
  if (v.sensitivity)
    j["sensitivity"] = to_string(*v.sensitivity);
  else
    j["sensitivity"] = nullptr;
  if (v.witness) j["witness"] = format_lasso_literal(*v.witness);
  nlohmann::ordered_json stats;
  if (v.reduction_stats) {
    stats["places_removed"] = v.reduction_stats->places_removed;
    stats["transitions_removed"] = v.reduction_stats->transitions_removed;
  }
  stats["states_explored"] = v.states_explored;
  stats["wall_ms"] = v.wall_ms;
  j["stats"] = std::move(stats);
  return j;
}

Verdict semi_decide(const PetriNet& net, const PropertyBinding& binding, const Ltl& f,
                    const CheckSettings& settings) {
  auto t0 = Clock::now();
  Verdict v;
  v.sensitivity = try_classify(f, settings);
  if (!v.sensitivity || *v.sensitivity == SensitivityClass::LS) {
    // Nothing can be trusted either way; don't pay for the reduction.
    v.outcome = Verdict::Outcome::Unknown;
    v.trusted = false;
    v.procedure = v.sensitivity ? "semi/ls-abort" : "semi/classification-failed";
    v.wall_ms = ms_since(t0);
    return v;
  }
  SensitivityClass cls = *v.sensitivity;
  Prepared p = prepare_reduced(net, binding, f, settings);
  v.reduction_stats = p.stats;
  Tgba prod = product(p.neg, p.kt, settings.lim);
  v.states_explored = prod.num_states;
  auto [empty, wit] = is_empty_with_witness(prod);
  if (empty) {
    v.outcome = Verdict::Outcome::Holds;
    v.trusted = cls == SensitivityClass::SI || cls == SensitivityClass::LI;
  } else {
    v.outcome = Verdict::Outcome::Violated;
    v.witness = std::move(wit);
    v.trusted = cls == SensitivityClass::SI || cls == SensitivityClass::ShI;
  }
  v.procedure = "semi/reduced-product";
  v.wall_ms = ms_since(t0);
  return v;
}

std::optional<Verdict> cl_extension_check(const PetriNet& net,
                                          const PropertyBinding& binding, const Ltl& f,
                                          const CheckSettings& settings) {
  auto t0 = Clock::now();
  Prepared p = prepare_reduced(net, binding, f, settings);
  Tgba prod = product(simp(closure_cl(p.neg, settings.lim)), p.kt, settings.lim);
  if (!is_empty(prod)) return std::nullopt;
  Verdict v;
  v.outcome = Verdict::Outcome::Holds;
  v.trusted = true;
  v.procedure = "cl-extension";
  v.reduction_stats = p.stats;
  v.states_explored = prod.num_states;
  v.wall_ms = ms_since(t0);
  return v;
}

Verdict revisited_decide(const PetriNet& net, const PropertyBinding& binding,
                         const Ltl& f, const CheckSettings& settings) {
  auto t0 = Clock::now();
  Verdict v;
  v.sensitivity = try_classify(f, settings);
  Prepared p = prepare_reduced(net, binding, f, settings);
  v.reduction_stats = p.stats;

  // Step 1: optimistic product on the reduced system.
  Tgba prod = product(p.neg, p.kt, settings.lim);
  v.states_explored += prod.num_states;
  auto [empty, wit] = is_empty_with_witness(prod);

  // Step 2: the semi-decision trust pairing settles it when the class allows.
  if (v.sensitivity && *v.sensitivity != SensitivityClass::LS) {
    SensitivityClass cls = *v.sensitivity;
    if (empty && (cls == SensitivityClass::SI || cls == SensitivityClass::LI)) {
      v.outcome = Verdict::Outcome::Holds;
      v.trusted = true;
      v.procedure = "revisited/semi";
      v.wall_ms = ms_since(t0);
      return v;
    }
    if (!empty && (cls == SensitivityClass::SI || cls == SensitivityClass::ShI)) {
      v.outcome = Verdict::Outcome::Violated;
      v.witness = std::move(wit);
      v.trusted = true;
      v.procedure = "revisited/semi";
      v.wall_ms = ms_since(t0);
      return v;
    }
  }

  // Step 3: one-sided confirmations on the reduced system.
  bool partition_failed = false;
  if (empty) {
    try {
      Tgba cprod = product(simp(closure_cl(p.neg, settings.lim)), p.kt, settings.lim);
      v.states_explored += cprod.num_states;
      if (is_empty(cprod)) {
        v.outcome = Verdict::Outcome::Holds;
        v.trusted = true;
        v.procedure = "revisited/cl-extension";
        v.wall_ms = ms_since(t0);
        return v;
      }
    } catch (const resource_error&) {
      // fall through to the fallback
    }
  } else {
    try {
      Tgba li_part = lengthening_part_of_negation(p.neg, f, settings.lim);
      Tgba lprod = product(li_part, p.kt, settings.lim);
      v.states_explored += lprod.num_states;
      auto [lempty, lwit] = is_empty_with_witness(lprod);
      if (!lempty) {
        v.outcome = Verdict::Outcome::Violated;
        v.witness = std::move(lwit);
        v.trusted = true;
        v.procedure = "revisited/li-part";
        v.wall_ms = ms_since(t0);
        return v;
      }
    } catch (const resource_error&) {
      partition_failed = true;
    }
  }

  // Step 4: fallback.  Partition L(!f); the stutter-insensitive part can be
  // decided on the reduced system, the rest needs the original one.
  std::optional<LanguagePartition> part;
  if (!partition_failed) {
    try {
      part = partition_language(negate_to_nnf(f), settings.lim);
    } catch (const resource_error&) {
      partition_failed = true;
    }
  }
  if (partition_failed || !part) {
    // Last resort: the plain unreduced product, exact by construction.
    Tgba kt0 = kripke_to_tgba(build_kripke(net, p.rb, settings.lim.state_cap));
    Tgba full = product(p.neg, kt0, settings.lim);
    v.states_explored += full.num_states;
    auto [fempty, fwit] = is_empty_with_witness(full);
    v.outcome = fempty ? Verdict::Outcome::Holds : Verdict::Outcome::Violated;
    if (!fempty) v.witness = std::move(fwit);
    v.trusted = true;
    v.procedure = "revisited/unreduced-fallback";
    v.wall_ms = ms_since(t0);
    return v;
  }

  Tgba kt0 = kripke_to_tgba(build_kripke(net, p.rb, settings.lim.state_cap));
  struct Piece {
    const Tgba* part;
    const Tgba* space;
    const char* tag;
  };
  const Piece pieces[] = {
      {&part->si_pm, &p.kt, "revisited/part-si"},
      {&part->si_plus, &kt0, "revisited/part-si-plus"},
      {&part->si_minus, &kt0, "revisited/part-si-minus"},
      {&part->ss, &kt0, "revisited/part-ss"},
  };
  for (const Piece& piece : pieces) {
    Tgba pp = product(*piece.part, *piece.space, settings.lim);
    v.states_explored += pp.num_states;
    auto [pempty, pwit] = is_empty_with_witness(pp);
    if (!pempty) {
      v.outcome = Verdict::Outcome::Violated;
      v.witness = std::move(pwit);
      v.trusted = true;
      v.procedure = piece.tag;
      v.wall_ms = ms_since(t0);
      return v;
    }
  }
  v.outcome = Verdict::Outcome::Holds;
  v.trusted = true;
  v.procedure = "revisited/partition-empty";
  v.wall_ms = ms_since(t0);
  return v;
}

std::pair<bool, std::optional<LassoWitness>> ground_truth_check(
    const PetriNet& net, const PropertyBinding& binding, const Ltl& f,
    const CheckSettings& settings) {
  PropertyBinding rb = restrict_binding(binding, f);
  Tgba kt = kripke_to_tgba(build_kripke(net, rb, settings.lim.state_cap));
  Tgba neg = simp(translate(negate_to_nnf(f), settings.lim));
  Tgba prod = product(neg, kt, settings.lim);
  return is_empty_with_witness(prod);
}

}  // namespace stutterkit
