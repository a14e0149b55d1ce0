#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace stutterkit {

struct Tgba;

// A valuation is a bitset over an ordered atom list: bit i set = atom i true.
using Valuation = std::uint32_t;

// Ultimately periodic ω-word  stem · loop^ω.
// Normalized form: the loop is primitive (not a proper power) and the stem
// does not end with the loop's last symbol (maximally pulled left).  A
// one-symbol loop is the ω-tail encoding s^ω.
struct LassoWord {
  std::vector<std::string> ap;   // bit meaning for the valuations
  std::vector<Valuation> stem;
  std::vector<Valuation> loop;   // nonempty

  bool operator==(const LassoWord& o) const {
    return ap == o.ap && stem == o.stem && loop == o.loop;
  }
};

// Run-length block view of a lasso word: stem_blocks then loop_blocks
// repeating forever, or (for a uniform tail) stem_blocks then omega^ω.
// Adjacent blocks carry distinct symbols, across the seam and the loop's
// wrap-around included.
struct Block {
  Valuation symbol;
  std::uint64_t exponent;  // >= 1
  bool operator==(const Block& o) const {
    return symbol == o.symbol && exponent == o.exponent;
  }
};

struct BlockForm {
  std::vector<Block> stem_blocks;
  std::vector<Block> loop_blocks;       // empty iff omega is set
  std::optional<Valuation> omega;       // uniform infinite tail symbol
};

LassoWord normalize(const LassoWord& w);
bool is_normalized(const LassoWord& w);
BlockForm block_form(const LassoWord& w);  // pre: normalized

// w1 ⪯ w2: same block symbol structure, pointwise dominated exponents;
// ω-tailed words compare only with ω-tailed words sharing the tail symbol,
// never with plain words.  Pre: both normalized, same atom list.
bool shorter_than(const LassoWord& w1, const LassoWord& w2);

// Same shortest representative (all exponents clamped to 1).
bool stutter_equivalent(const LassoWord& w1, const LassoWord& w2);
LassoWord canonical_shortest(const LassoWord& w);

// ---------------------------------------------------------------------------
// Bounded brute-force sensitivity oracle over an automaton's language.

struct ViolationPair {
  LassoWord shorter, longer;  // shorter ⪯ longer
};

struct SensitivityReport {
  std::uint32_t stem_max = 0, loop_max = 0;
  // longer accepted but shorter rejected:
  std::vector<ViolationPair> shortening_violations;
  // shorter accepted but longer rejected:
  std::vector<ViolationPair> lengthening_violations;
  std::uint64_t shortening_count = 0;  // totals (lists may be capped)
  std::uint64_t lengthening_count = 0;
  std::uint64_t lassos_enumerated = 0;
  std::uint64_t accepted = 0;

  bool shortening_ok() const { return shortening_count == 0; }
  bool lengthening_ok() const { return lengthening_count == 0; }
};

// Enumerates every normalized lasso over a.ap within the bounds, tests
// membership, and compares all comparable bounded pairs.  `max_recorded`
// caps the listed examples, not the counts.
SensitivityReport bounded_sensitivity_oracle(const Tgba& a,
                                             std::uint32_t stem_max,
                                             std::uint32_t loop_max,
                                             std::size_t max_recorded = 16);

// Calls fn for every normalized lasso with |stem| ≤ stem_max,
// 1 ≤ |loop| ≤ loop_max over an alphabet of 2^num_ap valuations.
void enumerate_normalized_lassos(std::uint32_t num_ap, std::uint32_t stem_max,
                                 std::uint32_t loop_max,
                                 const std::function<void(const LassoWord&)>& fn,
                                 const std::vector<std::string>* ap = nullptr);

// Literal syntax: stem valuations, ';', loop valuations; each valuation is a
// braced set of true atoms, e.g. "{p}{p};{}".
LassoWord parse_lasso_literal(const std::string& text,
                              const std::vector<std::string>& ap);
std::string format_lasso_literal(const LassoWord& w);

}  // namespace stutterkit
