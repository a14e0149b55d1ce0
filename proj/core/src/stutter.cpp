#include "stutterkit/stutter.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "stutterkit/complement.hpp"
#include "stutterkit/translate.hpp"

namespace stutterkit {

namespace {

using EdgeKey = std::tuple<std::uint32_t, std::uint32_t, MarkSet>;

Tgba from_merged(const Tgba& shape, std::uint32_t num_states,
                 const std::map<EdgeKey, Guard>& merged) {
  Tgba r;
  r.ap = shape.ap;
  r.num_states = num_states;
  r.initial = shape.initial;
  r.acceptance_count = shape.acceptance_count;
  r.edges.reserve(merged.size());
  for (const auto& [key, guard] : merged)  // map order: sorted by (src,dst,marks)
    r.edges.push_back({std::get<0>(key), std::get<1>(key), guard, std::get<2>(key)});
  return r;
}

Tgba simplify(const Tgba& a) { return bisim_quotient(reduce_marks(trim(a))); }

}  // namespace

Tgba closure_cl(const Tgba& a, const ExecLimits& lim) {
  const std::uint32_t nl = a.num_letters();
  std::map<EdgeKey, Guard> merged;

  // Per letter, saturate facts "src reaches dst reading one v, seeing marks M"
  // under composition, keeping a mark-maximal antichain per (src, dst).
  for (std::uint32_t v = 0; v < nl; ++v) {
    const Guard bit = Guard(1) << v;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<MarkSet>> facts;
    std::vector<std::vector<std::pair<std::uint32_t, MarkSet>>> out(a.num_states),
        in(a.num_states);
    std::deque<std::tuple<std::uint32_t, std::uint32_t, MarkSet>> work;
    std::size_t total = 0;

    auto insert = [&](std::uint32_t s, std::uint32_t d, MarkSet m) {
      auto& chain = facts[{s, d}];
      for (MarkSet x : chain)
        if ((x & m) == m) return;  // an existing fact already dominates m
      chain.erase(std::remove_if(chain.begin(), chain.end(),
                                 [m](MarkSet x) { return (m & x) == x; }),
                  chain.end());
      chain.push_back(m);
      out[s].push_back({d, m});
      in[d].push_back({s, m});
      work.emplace_back(s, d, m);
      lim.check_states(++total, "closure_cl");
    };

    for (const TgbaEdge& e : a.edges)
      if (e.guard & bit) insert(e.src, e.dst, e.marks);

    std::size_t pops = 0;
    while (!work.empty()) {
      if ((++pops & 1023) == 0) lim.check_deadline("closure_cl");
      auto [s, d, m] = work.front();
      work.pop_front();
      // Compose with facts present now; later facts meet this one when popped.
      for (std::size_t i = 0, n = out[d].size(); i < n; ++i) {
        auto [d2, m2] = out[d][i];
        insert(s, d2, m | m2);
      }
      for (std::size_t i = 0, n = in[s].size(); i < n; ++i) {
        auto [s0, m0] = in[s][i];
        insert(s0, d, m0 | m);
      }
    }

    for (const auto& [sd, chain] : facts)
      for (MarkSet m : chain) merged[{sd.first, sd.second, m}] |= bit;
  }

  return from_merged(a, a.num_states, merged);
}

Tgba selfloop_sl(const Tgba& a0, const ExecLimits& lim) {
  // With k = 0 every run is accepting, so an added unmarked self-loop would
  // let runs park forever; mark everything first so parking is non-accepting.
  const Tgba a = ensure_marked(a0);
  const auto out = a.out_index();

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> memo;
  std::deque<std::pair<std::uint32_t, std::uint32_t>> fresh;
  std::uint32_t next = a.num_states;
  auto mem = [&](std::uint32_t q, std::uint32_t v) {
    auto [it, inserted] = memo.insert({{q, v}, next});
    if (inserted) {
      fresh.push_back({q, v});
      lim.check_states(++next, "selfloop_sl");
    }
    return it->second;
  };

  std::map<EdgeKey, Guard> merged;
  auto add = [&](std::uint32_t s, std::uint32_t d, Guard g, MarkSet m) {
    merged[{s, d, m}] |= g;
  };

  // Original edges stay; each also forks into the destination's memory state
  // for the letter read, which absorbs extra repetitions of that letter.
  for (const TgbaEdge& e : a.edges) {
    add(e.src, e.dst, e.guard, e.marks);
    for (Guard g = e.guard; g; g &= g - 1) {
      std::uint32_t v = static_cast<std::uint32_t>(std::countr_zero(g));
      add(e.src, mem(e.dst, v), Guard(1) << v, e.marks);
    }
  }
  while (!fresh.empty()) {
    lim.check_deadline("selfloop_sl");
    auto [q, v] = fresh.front();
    fresh.pop_front();
    std::uint32_t m = memo.at({q, v});
    add(m, m, Guard(1) << v, 0);
    for (std::uint32_t ei : out[q]) {
      const TgbaEdge& e = a.edges[ei];
      add(m, e.dst, e.guard, e.marks);
      for (Guard g = e.guard; g; g &= g - 1) {
        std::uint32_t u = static_cast<std::uint32_t>(std::countr_zero(g));
        add(m, mem(e.dst, u), Guard(1) << u, e.marks);
      }
    }
  }

  return from_merged(a, next, merged);
}

const char* to_string(SensitivityClass c) {
  switch (c) {
    case SensitivityClass::SI: return "SI";
    case SensitivityClass::LI: return "LI";
    case SensitivityClass::ShI: return "ShI";
    case SensitivityClass::LS: return "LS";
  }
  return "?";
}

SensitivityTests sensitivity_tests(const Ltl& f, const ExecLimits& lim) {
  Tgba pos = simplify(translate(f, lim));
  Tgba neg = simplify(translate(negate_to_nnf(f), lim));
  SensitivityTests t;
  t.shortening_insensitive = is_empty(product(closure_cl(pos, lim), neg, lim));
  t.lengthening_insensitive = is_empty(product(selfloop_sl(pos, lim), neg, lim));
  return t;
}

SensitivityClass classify_sensitivity(const Ltl& f, const ExecLimits& lim) {
  SensitivityTests t = sensitivity_tests(f, lim);
  if (t.shortening_insensitive && t.lengthening_insensitive) return SensitivityClass::SI;
  if (t.shortening_insensitive) return SensitivityClass::ShI;
  if (t.lengthening_insensitive) return SensitivityClass::LI;
  return SensitivityClass::LS;
}

LanguagePartition partition_language(const Ltl& f, const ExecLimits& lim,
                                     bool union_variant) {
  Tgba A = simplify(translate(f, lim));
  Tgba An = simplify(translate(negate_to_nnf(f), lim));

  LanguagePartition part;
  part.union_variant = union_variant;

  if (!union_variant) {
    // D accepts the stutter classes of L(f)-words holding a word outside
    // L(f); si_pm keeps the words of L(f) whose class has none.  The set
    // differences below collapse: A' = A \ si_pm = A \ (A \ D) = A ∩ D, the
    // complement of A' is An ∪ comp(D), and ss = A' \ si_minus \ si_plus
    // = A' ∩ Dm ∩ Dp.  Only D, Dm and Dp ever get rank-complemented.
    Tgba E = simplify(selfloop_sl(closure_cl(A, lim), lim));
    Tgba C = simplify(product(E, An, lim));
    Tgba D = simplify(selfloop_sl(closure_cl(C, lim), lim));
    part.si_pm = simplify(product_with_complement(A, D, lim));

    // The complement of A' = A ∩ D is An ∪ comp(D), but L(D) is a union of
    // stutter classes (so closed both ways under ⪯) and cl(A') ⊆ cl(D) = D,
    // sl(A') ⊆ sl(D) = D: the comp(D) term meets neither closure, leaving
    // the cheap An product.
    Tgba Ap = simplify(product(A, D, lim));
    Tgba Dm, Dp;
    {
      Tgba Bm = simplify(closure_cl(Ap, lim));
      Tgba Cm = simplify(product(Bm, An, lim));
      Dm = simplify(selfloop_sl(Cm, lim));
      part.si_minus = simplify(product_with_complement(Ap, Dm, lim));
    }
    {
      Tgba Bp = simplify(selfloop_sl(Ap, lim));
      Tgba Cp = simplify(product(Bp, An, lim));
      Dp = simplify(closure_cl(Cp, lim));
      part.si_plus = simplify(product_with_complement(Ap, Dp, lim));
    }
    part.ss = simplify(product(simplify(product(Ap, Dm, lim)), Dp, lim));
  } else {
    // Union variant: run the pure-part pipelines on A itself, with the cheap
    // formula-level complement An standing in for the complement of A.  Each
    // result then absorbs the stutter-insensitive part; ss is the same
    // language either way (ss = A ∩ Dm ∩ Dp by the difference collapse).
    part.si_pm = empty_tgba(A.ap);
    Tgba Dm, Dp;
    {
      Tgba Cm = simplify(product(simplify(closure_cl(A, lim)), An, lim));
      Dm = simplify(selfloop_sl(Cm, lim));
      part.si_minus = simplify(product_with_complement(A, Dm, lim));
    }
    {
      Tgba Cp = simplify(product(simplify(selfloop_sl(A, lim)), An, lim));
      Dp = simplify(closure_cl(Cp, lim));
      part.si_plus = simplify(product_with_complement(A, Dp, lim));
    }
    part.ss = simplify(product(simplify(product(A, Dm, lim)), Dp, lim));
  }
  return part;
}

}  // namespace stutterkit
