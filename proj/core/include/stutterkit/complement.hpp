#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "stutterkit/limits.hpp"
#include "stutterkit/tgba.hpp"

namespace stutterkit {

// Rank-based complementation of a TGBA (via degeneralization to a
// state-based Büchi automaton and tight level rankings).  States of the
// complement are produced on demand so that product constructions only
// materialize the reachable part.
class ComplementExplorer {
 public:
  ComplementExplorer(const Tgba& a, const ExecLimits& lim = {});

  std::uint32_t initial_state() const { return initial_; }
  bool accepting(std::uint32_t id) const { return accepting_[id]; }
  // Successor complement states for one letter of ap() (cached).
  const std::vector<std::uint32_t>& successors(std::uint32_t id, Valuation letter);

  const std::vector<std::string>& ap() const { return ap_; }
  std::uint32_t num_letters() const { return 1u << ap_.size(); }
  std::size_t num_states() const { return accepting_.size(); }

 private:
  // Encoded state: [phase2 flag, rank per NBW state (-1 = absent; 0 in the
  // subset phase), obligation per NBW state (phase 2 only)].
  using Key = std::vector<std::int16_t>;

  std::uint32_t intern(Key key, bool acc);
  void expand(std::uint32_t id, Valuation letter);
  void spend(std::uint64_t n);
  void maximal_tight(const std::vector<std::uint32_t>& members, const std::vector<char>& is_f,
                     int bound, const std::function<void(const std::vector<int>&)>& emit);
  void all_tight(const std::vector<int>& caps, const std::vector<char>& is_f,
                 const std::function<void(const std::vector<int>&)>& emit);

  ExecLimits lim_;
  std::vector<std::string> ap_;
  // Underlying Büchi automaton (state-based acceptance).
  std::uint32_t nbw_n_ = 0;
  std::vector<char> nbw_accepting_;
  std::vector<std::vector<std::vector<std::uint32_t>>> nbw_succ_;  // [state][letter]
  std::uint32_t nbw_initial_ = 0;
  int rank_bound_ = 0;
  std::uint64_t enum_budget_ = 0;

  std::map<Key, std::uint32_t> ids_;
  std::vector<const Key*> keys_;
  std::vector<char> accepting_;
  std::vector<std::vector<std::vector<std::uint32_t>>> succ_;  // [id][letter]
  std::vector<std::vector<char>> expanded_;
  std::uint32_t initial_ = 0;
};

// Full complement automaton: L(result) = complement of L(a) over a.ap.
Tgba complement(const Tgba& a, const ExecLimits& lim = {});

// L(result) = L(x) ∩ complement(L(d)); only the product-reachable part of
// the complement is built.
Tgba product_with_complement(const Tgba& x, const Tgba& d, const ExecLimits& lim = {});

}  // namespace stutterkit
