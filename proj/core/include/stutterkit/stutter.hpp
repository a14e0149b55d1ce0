#pragma once

#include <string>

#include "stutterkit/limits.hpp"
#include "stutterkit/ltl.hpp"
#include "stutterkit/tgba.hpp"

namespace stutterkit {

// Shortening closure: accepts every word obtained from a word of `a` by
// reducing the repeat counts of its letter blocks (never below one, and an
// infinite tail stays infinite).  Built by saturating per-letter shortcut
// edges q1 -a-> q2 -a-> q3  ==>  q1 -a-> q3 carrying the union of both mark
// sets, keeping only mark-maximal edges per (src, letter, dst).
Tgba closure_cl(const Tgba& a, const ExecLimits& lim = {});

// Lengthening closure: accepts every word obtained from a word of `a` by
// increasing the repeat counts of its letter blocks.  Adds, for each state q
// and letter v, a memory state (q, v) with an unmarked self-loop on v;
// entering it consumes the first occurrence of the block, the self-loop
// absorbs the extra repetitions, and exits replay q's outgoing edges.
Tgba selfloop_sl(const Tgba& a, const ExecLimits& lim = {});

enum class SensitivityClass {
  SI,   // both shortening- and lengthening-insensitive (stutter-insensitive)
  LI,   // lengthening-insensitive only
  ShI,  // shortening-insensitive only
  LS,   // fully length-sensitive
};

const char* to_string(SensitivityClass c);

struct SensitivityTests {
  bool shortening_insensitive = false;
  bool lengthening_insensitive = false;
};

// Emptiness-based tests: L(f) is shortening-insensitive iff
// cl(A_f) x A_!f is empty, and lengthening-insensitive iff
// sl(A_f) x A_!f is empty.
SensitivityTests sensitivity_tests(const Ltl& f, const ExecLimits& lim = {});
SensitivityClass classify_sensitivity(const Ltl& f, const ExecLimits& lim = {});

// Partition of L(f) into its stutter-insensitive part, pure shortening- and
// lengthening-insensitive parts, and fully length-sensitive remainder.
//
//   si_pm:    words whose whole stutter-equivalence class lies inside L(f)
//   si_minus: words with all shortenings inside L(f), some lengthening outside
//   si_plus:  words with all lengthenings inside L(f), some shortening outside
//   ss:       words with both a shortening and a lengthening outside L(f)
//
// With union_variant set, si_minus and si_plus each absorb si_pm (which is
// then empty); ss is the same language either way.  The union variant avoids
// rank-based complementation of intermediate products and is cheaper.
struct LanguagePartition {
  Tgba si_pm;
  Tgba si_minus;
  Tgba si_plus;
  Tgba ss;
  bool union_variant = false;
};

LanguagePartition partition_language(const Ltl& f, const ExecLimits& lim = {},
                                     bool union_variant = false);

}  // namespace stutterkit
