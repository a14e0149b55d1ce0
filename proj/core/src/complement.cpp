#include "stutterkit/complement.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <unordered_map>

namespace stutterkit {

ComplementExplorer::ComplementExplorer(const Tgba& a, const ExecLimits& lim) : lim_(lim) {
  // State-based Büchi automaton for L(a): degeneralize, then split states by
  // whether the incoming edge was marked.
  Tgba t = degeneralize(reduce_marks(trim(a)));
  ap_ = t.ap;
  auto out = t.out_index();
  std::unordered_map<std::uint64_t, std::uint32_t> seen;
  std::deque<std::pair<std::uint32_t, std::uint32_t>> todo;  // (state, entered-marked)
  std::vector<char> acc;
  auto intern_nbw = [&](std::uint32_t q, std::uint32_t marked) {
    std::uint64_t key = (std::uint64_t(q) << 1) | marked;
    auto [it, fresh] = seen.emplace(key, static_cast<std::uint32_t>(seen.size()));
    if (fresh) {
      todo.emplace_back(q, marked);
      acc.push_back(static_cast<char>(marked));
    }
    return it->second;
  };
  nbw_initial_ = intern_nbw(t.initial, 0);
  std::vector<std::vector<std::vector<std::uint32_t>>> succ;
  while (!todo.empty()) {
    auto [q, marked] = todo.front();
    todo.pop_front();
    std::uint32_t id = seen[(std::uint64_t(q) << 1) | marked];
    if (succ.size() <= id) succ.resize(id + 1);
    succ[id].assign(1u << ap_.size(), {});
    for (std::uint32_t ei : out[q]) {
      const TgbaEdge& e = t.edges[ei];
      std::uint32_t dst = intern_nbw(e.dst, e.marks ? 1 : 0);
      for (std::uint32_t v = 0; v < (1u << ap_.size()); ++v)
        if (e.guard & (Guard(1) << v)) succ[id][v].push_back(dst);
    }
    for (auto& lst : succ[id]) {
      std::sort(lst.begin(), lst.end());
      lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
    }
  }
  nbw_n_ = static_cast<std::uint32_t>(seen.size());
  succ.resize(nbw_n_);
  for (auto& per : succ)
    if (per.empty()) per.assign(1u << ap_.size(), {});

  // Quotient the Büchi automaton by forward bisimulation (partition
  // refinement over acceptance + per-letter successor classes).  Rankings
  // are exponential in the subset sizes, so every merged state counts.
  std::vector<std::uint32_t> cls(nbw_n_);
  for (std::uint32_t i = 0; i < nbw_n_; ++i) cls[i] = acc[i] ? 1 : 0;
  std::size_t classes = 0;
  for (;;) {
    std::map<std::pair<std::uint32_t, std::vector<std::vector<std::uint32_t>>>,
             std::uint32_t> sig;
    std::vector<std::uint32_t> next(nbw_n_);
    for (std::uint32_t i = 0; i < nbw_n_; ++i) {
      std::vector<std::vector<std::uint32_t>> per;
      for (const auto& lst : succ[i]) {
        std::vector<std::uint32_t> cs;
        for (std::uint32_t q : lst) cs.push_back(cls[q]);
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        per.push_back(std::move(cs));
      }
      next[i] = sig.emplace(std::make_pair(cls[i], std::move(per)),
                            static_cast<std::uint32_t>(sig.size())).first->second;
    }
    // Each signature embeds the old class, so rounds only split; a stable
    // class count is a fixpoint.
    bool stable = sig.size() == classes;
    classes = sig.size();
    cls = std::move(next);
    if (stable) break;
  }
  std::uint32_t m = static_cast<std::uint32_t>(classes);
  std::vector<std::vector<std::vector<std::uint32_t>>> qsucc(m);
  std::vector<char> qacc(m, 0);
  for (std::uint32_t i = 0; i < nbw_n_; ++i) {
    if (!qsucc[cls[i]].empty()) continue;
    qacc[cls[i]] = acc[i];
    for (const auto& lst : succ[i]) {
      std::vector<std::uint32_t> cs;
      for (std::uint32_t q : lst) cs.push_back(cls[q]);
      std::sort(cs.begin(), cs.end());
      cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
      qsucc[cls[i]].push_back(std::move(cs));
    }
  }
  nbw_initial_ = cls[nbw_initial_];
  nbw_n_ = m;
  nbw_succ_ = std::move(qsucc);
  nbw_accepting_ = std::move(qacc);
  rank_bound_ = lim.rank_bound < 0 ? static_cast<int>(2 * nbw_n_) : lim.rank_bound;
  enum_budget_ = std::max<std::uint64_t>(4 * lim.complement_cap, 1'000'000);

  // Initial complement state: subset phase with {initial}.
  Key init(1 + 2 * nbw_n_, 0);
  for (std::uint32_t i = 0; i < nbw_n_; ++i) init[1 + i] = -1;
  init[1 + nbw_initial_] = 0;
  initial_ = intern(std::move(init), false);
}

std::uint32_t ComplementExplorer::intern(Key key, bool acc) {
  auto [it, fresh] = ids_.emplace(std::move(key), static_cast<std::uint32_t>(ids_.size()));
  if (fresh) {
    if (ids_.size() > lim_.complement_cap)
      throw resource_error("complement cap exceeded: " + std::to_string(ids_.size()) +
                           " states");
    keys_.push_back(&it->first);
    accepting_.push_back(acc ? 1 : 0);
    succ_.emplace_back(1u << ap_.size());
    expanded_.emplace_back(1u << ap_.size(), 0);
  }
  return it->second;
}

void ComplementExplorer::spend(std::uint64_t n) {
  if (enum_budget_ < n) throw resource_error("complement ranking budget exceeded");
  enum_budget_ -= n;
}

// Maximal tight rankings over `members` with uniform cap `bound` (odd):
// pick an odd maximum r <= bound, give each odd value below r to one
// distinct non-F member, every other non-F member gets r, every F member
// gets r - 1.  Every tight ranking is pointwise dominated by one of these,
// and later phase-2 steps may then select the dominated true ranking, so
// jumps restricted to this family stay complete; their pinned-down odd
// values also keep the downstream rank caps low.
void ComplementExplorer::maximal_tight(const std::vector<std::uint32_t>& members,
                                       const std::vector<char>& is_f, int bound,
                                       const std::function<void(const std::vector<int>&)>& emit) {
  std::vector<std::size_t> non_f;
  for (std::size_t i = 0; i < members.size(); ++i)
    if (!is_f[i]) non_f.push_back(i);
  if (non_f.empty()) return;
  for (int r = 1; r <= bound; r += 2) {
    int below = (r - 1) / 2;  // odd values 1,3,...,r-2
    if (static_cast<std::size_t>(below) > non_f.size()) break;
    std::vector<int> rank(members.size());
    std::vector<std::size_t> witness(below);
    std::vector<char> used(non_f.size(), 0);
    std::function<void(int)> rec = [&](int slot) {
      spend(1);
      if (slot == below) {
        for (std::size_t i = 0; i < members.size(); ++i) rank[i] = is_f[i] ? r - 1 : r;
        for (int s = 0; s < below; ++s) rank[non_f[witness[s]]] = 2 * s + 1;
        emit(rank);
        return;
      }
      for (std::size_t c = 0; c < non_f.size(); ++c) {
        if (used[c]) continue;
        used[c] = 1;
        witness[slot] = c;
        rec(slot + 1);
        used[c] = 0;
      }
    };
    rec(0);
  }
}

// All tight rankings with rank[i] <= caps[i] and F members even.  Pruned
// recursive walk (budgeted).
void ComplementExplorer::all_tight(const std::vector<int>& caps, const std::vector<char>& is_f,
                                   const std::function<void(const std::vector<int>&)>& emit) {
  const std::size_t m = caps.size();
  std::vector<int> rank(m, 0);
  std::function<void(std::size_t, int, std::uint64_t)> rec =
      [&](std::size_t i, int cur_max, std::uint64_t odds) {
        spend(1);
        if (i == m) {
          if (!(cur_max & 1)) return;
          std::uint64_t need = (std::uint64_t(1) << (cur_max / 2 + 1)) - 1;
          if (odds == need) emit(rank);
          return;
        }
        // Odd values <= cur_max still missing must fit in the remaining slots.
        if (cur_max >= 1) {
          std::uint64_t need = (std::uint64_t(1) << (cur_max / 2 + 1)) - 1;
          int missing = static_cast<int>(__builtin_popcountll(need & ~odds));
          if (missing > static_cast<int>(m - i)) return;
        }
        for (int r = 0; r <= caps[i]; ++r) {
          if (is_f[i] && (r & 1)) continue;
          rank[i] = r;
          rec(i + 1, std::max(cur_max, r),
              (r & 1) ? (odds | (std::uint64_t(1) << (r / 2))) : odds);
        }
      };
  rec(0, 0, 0);
}

void ComplementExplorer::expand(std::uint32_t id, Valuation letter) {
  lim_.check_deadline("complement");
  const Key key = *keys_[id];
  const bool phase2 = key[0] != 0;
  const std::uint32_t n = nbw_n_;

  // Successor subset with per-state rank caps (phase 2: min over predecessors).
  std::vector<int> cap(n, -1);
  for (std::uint32_t q = 0; q < n; ++q) {
    if (key[1 + q] < 0) continue;
    for (std::uint32_t q2 : nbw_succ_[q][letter]) {
      int allowed = phase2 ? key[1 + q] : rank_bound_;
      cap[q2] = cap[q2] < 0 ? allowed : std::min(cap[q2], allowed);
    }
  }
  std::vector<std::uint32_t> members;
  for (std::uint32_t q = 0; q < n; ++q)
    if (cap[q] >= 0) members.push_back(q);

  std::vector<std::uint32_t>& out = succ_[id][letter];
  out.clear();

  if (members.empty()) {
    // Dead end for every run of the input: accepting sink.
    Key sink(1 + 2 * n, 0);
    for (std::uint32_t i = 0; i < n; ++i) sink[1 + i] = -1;
    out.push_back(intern(std::move(sink), true));
    expanded_[id][letter] = 1;
    return;
  }

  std::vector<char> is_f;
  int non_f = 0;
  for (std::uint32_t q : members) {
    is_f.push_back(nbw_accepting_[q]);
    if (!nbw_accepting_[q]) ++non_f;
  }
  int tight_max = std::min(rank_bound_, 2 * non_f - 1);

  bool had_oblig = false;
  if (phase2)
    for (std::uint32_t q = 0; q < n; ++q)
      if (key[1 + n + q]) { had_oblig = true; break; }

  auto push_ranked = [&](const std::vector<int>& rank, bool at_jump) {
    Key nxt(1 + 2 * n, 0);
    nxt[0] = 1;
    for (std::uint32_t i = 0; i < n; ++i) nxt[1 + i] = -1;
    for (std::size_t i = 0; i < members.size(); ++i) nxt[1 + members[i]] = rank[i];
    bool any = false;
    if (at_jump) {
      // The obligation starts discharged at the jump.
    } else if (had_oblig) {
      for (std::uint32_t q = 0; q < n; ++q) {
        if (!key[1 + n + q]) continue;
        for (std::uint32_t q2 : nbw_succ_[q][letter])
          if (nxt[1 + q2] >= 0 && !(nxt[1 + q2] & 1)) {
            nxt[1 + n + q2] = 1;
            any = true;
          }
      }
    } else {
      // Refill with the even-ranked states after a discharge.
      for (std::size_t i = 0; i < members.size(); ++i)
        if (!(rank[i] & 1)) {
          nxt[1 + n + members[i]] = 1;
          any = true;
        }
    }
    out.push_back(intern(std::move(nxt), !any));
  };

  if (!phase2) {
    // Deterministic subset successor.
    Key nxt(1 + 2 * n, 0);
    for (std::uint32_t i = 0; i < n; ++i) nxt[1 + i] = -1;
    for (std::uint32_t q : members) nxt[1 + q] = 0;
    out.push_back(intern(std::move(nxt), false));
    // Jump: maximal tight rankings suffice (any tight level ranking is
    // dominated by one, and later steps may follow the true ranks).
    if (tight_max >= 1)
      maximal_tight(members, is_f, tight_max,
                    [&](const std::vector<int>& rank) { push_ranked(rank, true); });
  } else if (tight_max >= 1) {
    std::vector<int> caps;
    for (std::size_t i = 0; i < members.size(); ++i)
      caps.push_back(std::min(cap[members[i]], tight_max));
    all_tight(caps, is_f, [&](const std::vector<int>& rank) { push_ranked(rank, false); });
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  expanded_[id][letter] = 1;
}

const std::vector<std::uint32_t>& ComplementExplorer::successors(std::uint32_t id,
                                                                 Valuation letter) {
  if (!expanded_[id][letter]) expand(id, letter);
  return succ_[id][letter];
}

Tgba complement(const Tgba& a, const ExecLimits& lim) {
  ComplementExplorer ex(a, lim);
  Tgba r;
  r.ap = ex.ap();
  r.acceptance_count = 1;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Guard> merged;
  std::deque<std::uint32_t> todo;
  std::vector<char> visited;
  auto visit = [&](std::uint32_t id) {
    if (visited.size() <= id) visited.resize(id + 1, 0);
    if (!visited[id]) {
      visited[id] = 1;
      todo.push_back(id);
    }
  };
  visit(ex.initial_state());
  while (!todo.empty()) {
    lim.check_deadline("complement");
    std::uint32_t src = todo.front();
    todo.pop_front();
    for (std::uint32_t v = 0; v < ex.num_letters(); ++v)
      for (std::uint32_t dst : ex.successors(src, v)) {
        merged[{src, dst}] |= Guard(1) << v;
        visit(dst);
      }
  }
  r.num_states = static_cast<std::uint32_t>(ex.num_states());
  r.initial = ex.initial_state();
  for (auto& [key, g] : merged)
    r.edges.push_back({key.first, key.second, g, ex.accepting(key.second) ? MarkSet(1) : 0});
  return trim(r);
}

Tgba product_with_complement(const Tgba& x, const Tgba& d, const ExecLimits& lim) {
  std::vector<std::string> apu = ap_union(x.ap, d.ap);
  if (apu.size() > kMaxAp) throw resource_error("too many atomic propositions in product");
  const Tgba a = extend_ap(x, apu);
  ComplementExplorer ex(d, lim);

  // Union letters grouped by their projection onto d's atoms.
  std::vector<int> pos;
  for (const auto& name : ex.ap()) {
    auto it = std::find(apu.begin(), apu.end(), name);
    assert(it != apu.end());
    pos.push_back(static_cast<int>(it - apu.begin()));
  }
  std::uint32_t d_letters = 1u << ex.ap().size();
  std::vector<Guard> mask(d_letters, 0);
  for (std::uint32_t v = 0; v < (1u << apu.size()); ++v) {
    std::uint32_t u = 0;
    for (std::size_t i = 0; i < pos.size(); ++i)
      if (v & (1u << pos[i])) u |= 1u << i;
    mask[u] |= Guard(1) << v;
  }

  Tgba r;
  r.ap = apu;
  r.acceptance_count = a.acceptance_count + 1;
  if (r.acceptance_count > kMaxMarks) throw resource_error("too many acceptance marks");
  auto ia = a.out_index();

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> seen;
  std::deque<std::pair<std::uint32_t, std::uint32_t>> todo;
  auto intern = [&](std::uint32_t qa, std::uint32_t qc) {
    auto [it, fresh] = seen.emplace(std::make_pair(qa, qc),
                                    static_cast<std::uint32_t>(seen.size()));
    if (fresh) {
      todo.emplace_back(qa, qc);
      lim.check_states(seen.size(), "product with complement");
    }
    return it->second;
  };
  r.initial = intern(a.initial, ex.initial_state());
  while (!todo.empty()) {
    lim.check_deadline("product with complement");
    auto [qa, qc] = todo.front();
    todo.pop_front();
    std::uint32_t src = seen[{qa, qc}];
    for (std::uint32_t eai : ia[qa]) {
      const TgbaEdge& e = a.edges[eai];
      for (std::uint32_t u = 0; u < d_letters; ++u) {
        Guard g = e.guard & mask[u];
        if (!g) continue;
        for (std::uint32_t qc2 : ex.successors(qc, u)) {
          std::uint32_t dst = intern(e.dst, qc2);
          MarkSet marks = e.marks;
          if (ex.accepting(qc2)) marks |= MarkSet(1) << a.acceptance_count;
          r.edges.push_back({src, dst, g, marks});
        }
      }
    }
  }
  r.num_states = static_cast<std::uint32_t>(seen.size());
  return r;
}

}  // namespace stutterkit
