#include "stutterkit/tgba.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace stutterkit {

std::vector<std::vector<std::uint32_t>> Tgba::out_index() const {
  std::vector<std::vector<std::uint32_t>> idx(num_states);
  for (std::uint32_t i = 0; i < edges.size(); ++i) idx[edges[i].src].push_back(i);
  return idx;
}

Tgba universal_tgba(const std::vector<std::string>& ap) {
  if (ap.size() > kMaxAp) throw resource_error("too many atomic propositions");
  Tgba a;
  a.ap = ap;
  a.num_states = 1;
  a.initial = 0;
  a.acceptance_count = 0;
  a.edges.push_back({0, 0, a.full_guard(), 0});
  return a;
}

Tgba empty_tgba(const std::vector<std::string>& ap) {
  Tgba a;
  a.ap = ap;
  a.num_states = 1;
  a.initial = 0;
  a.acceptance_count = 0;
  return a;
}

Tgba lasso_automaton(const LassoWord& w) {
  if (w.ap.size() > kMaxAp) throw resource_error("too many atomic propositions");
  Tgba a;
  a.ap = w.ap;
  std::uint32_t n = static_cast<std::uint32_t>(w.stem.size() + w.loop.size());
  a.num_states = n;
  a.initial = 0;
  a.acceptance_count = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    Valuation v = i < w.stem.size() ? w.stem[i] : w.loop[i - w.stem.size()];
    std::uint32_t nxt = i + 1 < n ? i + 1 : static_cast<std::uint32_t>(w.stem.size());
    a.edges.push_back({i, nxt, Guard(1) << v, 0});
  }
  return a;
}

Tgba ensure_marked(const Tgba& a) {
  if (a.acceptance_count > 0) return a;
  Tgba r = a;
  r.acceptance_count = 1;
  for (auto& e : r.edges) e.marks = 1;
  return r;
}

std::vector<std::string> ap_union(const std::vector<std::string>& a,
                                  const std::vector<std::string>& b) {
  std::vector<std::string> u = a;
  for (const auto& name : b)
    if (std::find(u.begin(), u.end(), name) == u.end()) u.push_back(name);
  return u;
}

// Bit-position map from old ap to new ap; new atoms absent from the old list
// are unconstrained (guards replicated over them).
static std::vector<int> ap_positions(const std::vector<std::string>& of,
                                     const std::vector<std::string>& in) {
  std::vector<int> pos;
  for (const auto& name : of) {
    auto it = std::find(in.begin(), in.end(), name);
    if (it == in.end()) return {};
    pos.push_back(static_cast<int>(it - in.begin()));
  }
  return pos;
}

// For every letter of the extended alphabet, the corresponding letter of the
// original one.
static std::vector<std::uint32_t> letter_projection(
    const std::vector<std::string>& from_ap, const std::vector<std::string>& to_ap) {
  std::vector<int> pos = ap_positions(to_ap, from_ap);
  std::uint32_t n = 1u << from_ap.size();
  std::vector<std::uint32_t> proj(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint32_t out = 0;
    for (std::size_t i = 0; i < pos.size(); ++i)
      if (v & (1u << pos[i])) out |= 1u << i;
    proj[v] = out;
  }
  return proj;
}

static Guard expand_guard(Guard g, const std::vector<std::uint32_t>& proj) {
  Guard out = 0;
  for (std::uint32_t v = 0; v < proj.size(); ++v)
    if (g & (Guard(1) << proj[v])) out |= Guard(1) << v;
  return out;
}

Tgba extend_ap(const Tgba& a, const std::vector<std::string>& new_ap) {
  if (new_ap == a.ap) return a;
  if (new_ap.size() > kMaxAp) throw resource_error("too many atomic propositions");
  if (ap_positions(a.ap, new_ap).empty() && !a.ap.empty())
    throw std::invalid_argument("extend_ap: new_ap must contain the old atoms");
  Tgba r = a;
  r.ap = new_ap;
  auto proj = letter_projection(new_ap, a.ap);
  for (auto& e : r.edges) e.guard = expand_guard(e.guard, proj);
  return r;
}

// ---------------------------------------------------------------------------
// Product

Tgba product(const Tgba& a0, const Tgba& b0, const ExecLimits& lim) {
  std::vector<std::string> apu = ap_union(a0.ap, b0.ap);
  if (apu.size() > kMaxAp) throw resource_error("too many atomic propositions in product");
  const Tgba a = extend_ap(a0, apu);
  const Tgba b = extend_ap(b0, apu);

  Tgba r;
  r.ap = apu;
  r.acceptance_count = a.acceptance_count + b.acceptance_count;
  if (r.acceptance_count > kMaxMarks) throw resource_error("too many acceptance marks");

  auto ia = a.out_index();
  auto ib = b.out_index();

  std::unordered_map<std::uint64_t, std::uint32_t> seen;
  std::deque<std::pair<std::uint32_t, std::uint32_t>> todo;
  auto intern = [&](std::uint32_t qa, std::uint32_t qb) {
    std::uint64_t key = (std::uint64_t(qa) << 32) | qb;
    auto [it, fresh] = seen.emplace(key, static_cast<std::uint32_t>(seen.size()));
    if (fresh) {
      todo.emplace_back(qa, qb);
      lim.check_states(seen.size(), "product");
    }
    return it->second;
  };
  r.initial = intern(a.initial, b.initial);
  while (!todo.empty()) {
    lim.check_deadline("product");
    auto [qa, qb] = todo.front();
    todo.pop_front();
    std::uint32_t src = seen[(std::uint64_t(qa) << 32) | qb];
    for (std::uint32_t eai : ia[qa]) {
      const TgbaEdge& ea = a.edges[eai];
      for (std::uint32_t ebi : ib[qb]) {
        const TgbaEdge& eb = b.edges[ebi];
        Guard g = ea.guard & eb.guard;
        if (!g) continue;
        std::uint32_t dst = intern(ea.dst, eb.dst);
        MarkSet marks = ea.marks | (eb.marks << a.acceptance_count);
        r.edges.push_back({src, dst, g, marks});
      }
    }
  }
  r.num_states = static_cast<std::uint32_t>(seen.size());
  return r;
}

// ---------------------------------------------------------------------------
// SCC machinery (iterative Tarjan)

namespace {

struct SccResult {
  std::vector<int> comp;       // state -> component id, -1 if unreachable
  std::uint32_t count = 0;     // number of components
};

SccResult tarjan(const Tgba& a, const std::vector<std::vector<std::uint32_t>>& out) {
  SccResult res;
  res.comp.assign(a.num_states, -1);
  std::vector<int> low(a.num_states, -1), idx(a.num_states, -1);
  std::vector<std::uint32_t> stack;
  std::vector<char> on_stack(a.num_states, 0);
  int counter = 0;

  struct Frame {
    std::uint32_t state;
    std::size_t edge_pos;
  };
  std::vector<Frame> call;
  call.push_back({a.initial, 0});
  idx[a.initial] = low[a.initial] = counter++;
  stack.push_back(a.initial);
  on_stack[a.initial] = 1;

  while (!call.empty()) {
    Frame& f = call.back();
    const auto& es = out[f.state];
    if (f.edge_pos < es.size()) {
      std::uint32_t dst = a.edges[es[f.edge_pos++]].dst;
      if (idx[dst] < 0) {
        idx[dst] = low[dst] = counter++;
        stack.push_back(dst);
        on_stack[dst] = 1;
        call.push_back({dst, 0});
      } else if (on_stack[dst]) {
        low[f.state] = std::min(low[f.state], idx[dst]);
      }
    } else {
      std::uint32_t v = f.state;
      call.pop_back();
      if (!call.empty())
        low[call.back().state] = std::min(low[call.back().state], low[v]);
      if (low[v] == idx[v]) {
        while (true) {
          std::uint32_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          res.comp[w] = static_cast<int>(res.count);
          if (w == v) break;
        }
        ++res.count;
      }
    }
  }
  return res;
}

}  // namespace

// ---------------------------------------------------------------------------
// Emptiness with witness

namespace {

// BFS over edges restricted to a predicate; returns edge path from src
// satisfying goal(edge), or empty if none.
std::vector<std::uint32_t> bfs_edges(const Tgba& a,
                                     const std::vector<std::vector<std::uint32_t>>& out,
                                     std::uint32_t src,
                                     const std::function<bool(std::uint32_t)>& edge_ok,
                                     const std::function<bool(std::uint32_t)>& goal_edge) {
  std::vector<int> pred_edge(a.num_states, -1);
  std::vector<char> visited(a.num_states, 0);
  std::deque<std::uint32_t> q;
  q.push_back(src);
  visited[src] = 1;
  while (!q.empty()) {
    std::uint32_t s = q.front();
    q.pop_front();
    for (std::uint32_t ei : out[s]) {
      if (!edge_ok(ei)) continue;
      if (goal_edge(ei)) {
        // Path to s, then this edge.
        std::vector<std::uint32_t> path;
        std::uint32_t cur = s;
        while (cur != src) {
          std::uint32_t e = static_cast<std::uint32_t>(pred_edge[cur]);
          path.push_back(e);
          cur = a.edges[e].src;
        }
        std::reverse(path.begin(), path.end());
        path.push_back(ei);
        return path;
      }
      std::uint32_t dst = a.edges[ei].dst;
      if (!visited[dst]) {
        visited[dst] = 1;
        pred_edge[dst] = static_cast<int>(ei);
        q.push_back(dst);
      }
    }
  }
  return {};
}

Valuation pick_letter(Guard g) {
  assert(g);
  for (std::uint32_t v = 0; v < 64; ++v)
    if (g & (Guard(1) << v)) return v;
  return 0;
}

}  // namespace

std::pair<bool, std::optional<LassoWitness>> is_empty_with_witness(const Tgba& a) {
  auto out = a.out_index();
  SccResult scc = tarjan(a, out);

  // Accepting component: internal edges cover all marks (k = 0: any edge).
  std::vector<MarkSet> comp_marks(scc.count, 0);
  std::vector<char> comp_has_edge(scc.count, 0);
  for (const TgbaEdge& e : a.edges) {
    if (scc.comp[e.src] < 0 || scc.comp[e.src] != scc.comp[e.dst]) continue;
    comp_marks[scc.comp[e.src]] |= e.marks;
    comp_has_edge[scc.comp[e.src]] = 1;
  }
  MarkSet want = a.all_marks();
  int target = -1;
  // Deterministic choice: first accepting component in state order.
  std::vector<std::uint32_t> comp_first(scc.count, ~0u);
  for (std::uint32_t s = 0; s < a.num_states; ++s)
    if (scc.comp[s] >= 0 && comp_first[scc.comp[s]] == ~0u) comp_first[scc.comp[s]] = s;
  std::uint32_t best_state = ~0u;
  for (std::uint32_t s = 0; s < a.num_states; ++s) {
    int c = scc.comp[s];
    if (c < 0) continue;
    if (!comp_has_edge[c]) continue;
    if ((comp_marks[c] & want) != want) continue;
    best_state = s;
    target = c;
    break;
  }
  if (target < 0) return {true, std::nullopt};

  // Stem: path from the initial state to the component.
  std::vector<std::uint32_t> stem_edges;
  if (scc.comp[a.initial] != target) {
    stem_edges = bfs_edges(
        a, out, a.initial, [&](std::uint32_t) { return true; },
        [&](std::uint32_t ei) { return scc.comp[a.edges[ei].dst] == target; });
    assert(!stem_edges.empty());
  }
  std::uint32_t anchor = stem_edges.empty() ? a.initial : a.edges[stem_edges.back()].dst;

  // Loop: walk inside the component collecting every mark, then close the
  // cycle back to the anchor.
  auto internal = [&](std::uint32_t ei) {
    return scc.comp[a.edges[ei].src] == target && scc.comp[a.edges[ei].dst] == target;
  };
  std::vector<std::uint32_t> loop_edges;
  std::uint32_t cur = anchor;
  MarkSet have = 0;
  for (std::uint32_t m = 0; m < a.acceptance_count; ++m) {
    if (have & (MarkSet(1) << m)) continue;
    auto seg = bfs_edges(a, out, cur, internal, [&](std::uint32_t ei) {
      return internal(ei) && (a.edges[ei].marks & (MarkSet(1) << m));
    });
    assert(!seg.empty());
    for (std::uint32_t ei : seg) {
      loop_edges.push_back(ei);
      have |= a.edges[ei].marks;
    }
    cur = a.edges[loop_edges.back()].dst;
  }
  if (loop_edges.empty() || cur != anchor) {
    // Close the cycle (also covers k = 0: find any nonempty cycle).
    auto seg = bfs_edges(a, out, cur, internal, [&](std::uint32_t ei) {
      return internal(ei) && a.edges[ei].dst == anchor;
    });
    assert(!seg.empty());
    for (std::uint32_t ei : seg) loop_edges.push_back(ei);
  }

  LassoWitness w;
  w.ap = a.ap;
  for (std::uint32_t ei : stem_edges) w.stem.push_back(pick_letter(a.edges[ei].guard));
  for (std::uint32_t ei : loop_edges) w.loop.push_back(pick_letter(a.edges[ei].guard));
  (void)best_state;
  return {false, normalize(w)};
}

bool is_empty(const Tgba& a) { return is_empty_with_witness(a).first; }

// ---------------------------------------------------------------------------
// Lasso membership

bool accepts_lasso(const Tgba& a, const LassoWord& w) {
  if (w.loop.empty()) throw std::invalid_argument("accepts_lasso: empty loop");
  // Remap w's valuations onto a's atom order.
  std::vector<int> pos = ap_positions(a.ap, w.ap);
  if (pos.empty() && !a.ap.empty())
    throw std::invalid_argument("accepts_lasso: word does not cover the automaton's atoms");
  const std::size_t S = w.stem.size(), N = S + w.loop.size();
  auto letter_at = [&](std::size_t i) -> std::uint32_t {
    Valuation v = i < S ? w.stem[i] : w.loop[i - S];
    std::uint32_t out = 0;
    for (std::size_t b = 0; b < pos.size(); ++b)
      if (v & (Valuation(1) << pos[b])) out |= 1u << b;
    return out;
  };
  std::vector<std::uint32_t> letters(N);
  for (std::size_t i = 0; i < N; ++i) letters[i] = letter_at(i);

  // Synchronize with the lasso graph, then look for an accepting cycle in
  // the product (all marks, k = 0: any cycle).
  Tgba p;
  p.ap = a.ap;
  p.acceptance_count = a.acceptance_count;
  auto out = a.out_index();
  std::unordered_map<std::uint64_t, std::uint32_t> seen;
  std::deque<std::pair<std::uint32_t, std::uint32_t>> todo;  // (state, pos)
  auto intern = [&](std::uint32_t q, std::uint32_t i) {
    std::uint64_t key = (std::uint64_t(q) << 32) | i;
    auto [it, fresh] = seen.emplace(key, static_cast<std::uint32_t>(seen.size()));
    if (fresh) todo.emplace_back(q, i);
    return it->second;
  };
  p.initial = intern(a.initial, 0);
  while (!todo.empty()) {
    auto [q, i] = todo.front();
    todo.pop_front();
    std::uint32_t src = seen[(std::uint64_t(q) << 32) | i];
    std::uint32_t nxt = i + 1 < N ? static_cast<std::uint32_t>(i + 1)
                                  : static_cast<std::uint32_t>(S);
    for (std::uint32_t ei : out[q]) {
      const TgbaEdge& e = a.edges[ei];
      if (!(e.guard & (Guard(1) << letters[i]))) continue;
      std::uint32_t dst = intern(e.dst, nxt);
      p.edges.push_back({src, dst, Guard(1) << letters[i], e.marks});
    }
  }
  p.num_states = static_cast<std::uint32_t>(seen.size());
  return !is_empty(p);
}

LassoMembership::LassoMembership(const Tgba& a) : a_(a), wide_(a.num_states > 64) {
  if (wide_) return;
  sigma_ = Valuation(1) << a.ap.size();
  succ_.assign(a.num_states, std::vector<std::uint64_t>(sigma_, 0));
  out_ = a.out_index();
  for (const TgbaEdge& e : a.edges)
    for (Valuation v = 0; v < sigma_; ++v)
      if (e.guard & (Guard(1) << v)) succ_[e.src][v] |= std::uint64_t(1) << e.dst;
}

bool LassoMembership::accepts(const LassoWord& w) {
  if (w.loop.empty()) throw std::invalid_argument("LassoMembership: empty loop");
  if (wide_) return accepts_lasso(a_, w);
  std::vector<int> pos = ap_positions(a_.ap, w.ap);
  if (pos.empty() && !a_.ap.empty())
    throw std::invalid_argument("LassoMembership: word does not cover the automaton's atoms");
  auto remap = [&](Valuation v) -> Valuation {
    Valuation out = 0;
    for (std::size_t b = 0; b < pos.size(); ++b)
      if (v & (Valuation(1) << pos[b])) out |= Valuation(1) << b;
    return out;
  };
  std::uint64_t r = std::uint64_t(1) << a_.initial;
  for (Valuation v : w.stem) {
    r = step(r, remap(v));
    if (!r) return false;
  }
  std::string key;
  key.reserve(w.loop.size() + 8);
  for (Valuation v : w.loop) key.push_back(static_cast<char>(remap(v)));
  for (int b = 0; b < 8; ++b) key.push_back(static_cast<char>(r >> (8 * b)));
  auto [it, fresh] = memo_.try_emplace(key, false);
  if (fresh) {
    std::vector<Valuation> loop(w.loop.size());
    for (std::size_t i = 0; i < w.loop.size(); ++i) loop[i] = remap(w.loop[i]);
    it->second = loop_accepts(loop, r);
  }
  return it->second;
}

std::uint64_t LassoMembership::step(std::uint64_t r, Valuation v) const {
  std::uint64_t out = 0;
  while (r) {
    int q = std::countr_zero(r);
    r &= r - 1;
    out |= succ_[q][v];
  }
  return out;
}

// Accepting cycle reachable from r in the loop graph (states x loop
// positions, a synthetic initial fanning out to r at position 0); mirrors
// the loop part of the accepts_lasso product.
bool LassoMembership::loop_accepts(const std::vector<Valuation>& loop,
                                   std::uint64_t r) const {
  const std::uint32_t len = static_cast<std::uint32_t>(loop.size());
  Tgba p;
  p.ap = a_.ap;
  p.acceptance_count = a_.acceptance_count;
  p.initial = 0;
  std::unordered_map<std::uint64_t, std::uint32_t> seen;
  std::deque<std::pair<std::uint32_t, std::uint32_t>> todo;  // (state, pos)
  auto intern = [&](std::uint32_t q, std::uint32_t j) {
    std::uint64_t key = (std::uint64_t(q) << 32) | j;
    auto [it, fresh] = seen.emplace(key, static_cast<std::uint32_t>(seen.size() + 1));
    if (fresh) todo.emplace_back(q, j);
    return it->second;
  };
  for (std::uint64_t m = r; m;) {
    int q = std::countr_zero(m);
    m &= m - 1;
    p.edges.push_back({0, intern(static_cast<std::uint32_t>(q), 0), Guard(1), {}});
  }
  while (!todo.empty()) {
    auto [q, j] = todo.front();
    todo.pop_front();
    std::uint32_t src = seen[(std::uint64_t(q) << 32) | j];
    std::uint32_t nxt = (j + 1) % len;
    for (std::uint32_t ei : out_[q]) {
      const TgbaEdge& e = a_.edges[ei];
      if (!(e.guard & (Guard(1) << loop[j]))) continue;
      p.edges.push_back({src, intern(e.dst, nxt), Guard(1) << loop[j], e.marks});
    }
  }
  p.num_states = static_cast<std::uint32_t>(seen.size() + 1);
  return !is_empty(p);
}

// ---------------------------------------------------------------------------
// Degeneralization

Tgba tgba_union(const Tgba& a0, const Tgba& b0) {
  std::vector<std::string> apu = ap_union(a0.ap, b0.ap);
  if (apu.size() > kMaxAp) throw resource_error("too many atomic propositions in union");
  const Tgba a = degeneralize(extend_ap(a0, apu));
  const Tgba b = degeneralize(extend_ap(b0, apu));

  Tgba r;
  r.ap = apu;
  r.acceptance_count = 1;
  r.num_states = 1 + a.num_states + b.num_states;
  r.initial = 0;
  auto sa = [&](std::uint32_t q) { return 1 + q; };
  auto sb = [&](std::uint32_t q) { return 1 + a.num_states + q; };
  // A fresh initial state copies both initials' outgoing edges; a run commits
  // to one component on its first step.
  for (const TgbaEdge& e : a.edges)
    if (e.src == a.initial) r.edges.push_back({0, sa(e.dst), e.guard, e.marks});
  for (const TgbaEdge& e : b.edges)
    if (e.src == b.initial) r.edges.push_back({0, sb(e.dst), e.guard, e.marks});
  for (const TgbaEdge& e : a.edges)
    r.edges.push_back({sa(e.src), sa(e.dst), e.guard, e.marks});
  for (const TgbaEdge& e : b.edges)
    r.edges.push_back({sb(e.src), sb(e.dst), e.guard, e.marks});
  std::stable_sort(r.edges.begin(), r.edges.end(),
                   [](const TgbaEdge& x, const TgbaEdge& y) { return x.src < y.src; });
  return r;
}

Tgba degeneralize(const Tgba& a) {
  if (a.acceptance_count == 1) return a;
  if (a.acceptance_count == 0) return ensure_marked(a);
  const std::uint32_t k = a.acceptance_count;
  auto out = a.out_index();
  Tgba r;
  r.ap = a.ap;
  r.acceptance_count = 1;
  std::unordered_map<std::uint64_t, std::uint32_t> seen;
  std::deque<std::pair<std::uint32_t, std::uint32_t>> todo;  // (state, level)
  auto intern = [&](std::uint32_t q, std::uint32_t lvl) {
    std::uint64_t key = (std::uint64_t(q) << 32) | lvl;
    auto [it, fresh] = seen.emplace(key, static_cast<std::uint32_t>(seen.size()));
    if (fresh) todo.emplace_back(q, lvl);
    return it->second;
  };
  r.initial = intern(a.initial, 0);
  while (!todo.empty()) {
    auto [q, lvl] = todo.front();
    todo.pop_front();
    std::uint32_t src = seen[(std::uint64_t(q) << 32) | lvl];
    for (std::uint32_t ei : out[q]) {
      const TgbaEdge& e = a.edges[ei];
      std::uint32_t j = lvl;
      while (j < k && (e.marks & (MarkSet(1) << j))) ++j;
      bool wrap = j == k;
      std::uint32_t nxt = wrap ? 0 : j;
      std::uint32_t dst = intern(e.dst, nxt);
      r.edges.push_back({src, dst, e.guard, wrap ? MarkSet(1) : MarkSet(0)});
    }
  }
  r.num_states = static_cast<std::uint32_t>(seen.size());
  return r;
}

// ---------------------------------------------------------------------------
// Trim

Tgba trim(const Tgba& a) {
  auto out = a.out_index();
  SccResult scc = tarjan(a, out);
  MarkSet want = a.all_marks();

  std::vector<MarkSet> comp_marks(scc.count, 0);
  std::vector<char> comp_has_edge(scc.count, 0);
  for (const TgbaEdge& e : a.edges) {
    if (scc.comp[e.src] < 0 || scc.comp[e.src] != scc.comp[e.dst]) continue;
    comp_marks[scc.comp[e.src]] |= e.marks;
    comp_has_edge[scc.comp[e.src]] = 1;
  }
  std::vector<char> alive(a.num_states, 0);
  for (std::uint32_t s = 0; s < a.num_states; ++s) {
    int c = scc.comp[s];
    if (c >= 0 && comp_has_edge[c] && (comp_marks[c] & want) == want) alive[s] = 1;
  }
  // Backward closure: alive if an edge leads to an alive state.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const TgbaEdge& e : a.edges) {
      if (scc.comp[e.src] < 0) continue;
      if (!alive[e.src] && alive[e.dst]) {
        alive[e.src] = 1;
        changed = true;
      }
    }
  }
  if (!alive[a.initial]) {
    Tgba e = empty_tgba(a.ap);
    e.acceptance_count = a.acceptance_count;
    return e;
  }
  std::vector<std::uint32_t> remap(a.num_states, ~0u);
  Tgba r;
  r.ap = a.ap;
  r.acceptance_count = a.acceptance_count;
  for (std::uint32_t s = 0; s < a.num_states; ++s)
    if (alive[s] && scc.comp[s] >= 0) {
      remap[s] = r.num_states++;
    }
  r.initial = remap[a.initial];
  for (const TgbaEdge& e : a.edges)
    if (remap[e.src] != ~0u && remap[e.dst] != ~0u)
      r.edges.push_back({remap[e.src], remap[e.dst], e.guard, e.marks});
  return r;
}

// ---------------------------------------------------------------------------
// Acceptance-mark reduction

Tgba reduce_marks(const Tgba& a) {
  if (a.acceptance_count == 0) return a;
  const std::uint32_t k = a.acceptance_count;
  std::vector<std::vector<std::uint32_t>> with(k);
  for (std::uint32_t ei = 0; ei < a.edges.size(); ++ei)
    for (std::uint32_t m = 0; m < k; ++m)
      if (a.edges[ei].marks & (MarkSet(1) << m)) with[m].push_back(ei);

  std::vector<char> keep(k, 1);
  for (std::uint32_t i = 0; i < k; ++i) {
    // A mark on every edge is satisfied by any infinite run.
    if (with[i].size() == a.edges.size() && !a.edges.empty()) {
      keep[i] = 0;
      continue;
    }
    // A mark whose edges include all of another mark's is implied by it.
    for (std::uint32_t j = 0; j < k && keep[i]; ++j) {
      if (j == i) continue;
      bool superset = std::includes(with[i].begin(), with[i].end(), with[j].begin(),
                                    with[j].end());
      if (superset && (with[i].size() != with[j].size() || i > j)) keep[i] = 0;
    }
  }

  std::vector<int> remap(k, -1);
  std::uint32_t nk = 0;
  for (std::uint32_t m = 0; m < k; ++m)
    if (keep[m]) remap[m] = static_cast<int>(nk++);
  if (nk == k) return a;
  Tgba r = a;
  r.acceptance_count = nk;
  for (TgbaEdge& e : r.edges) {
    MarkSet nm = 0;
    for (std::uint32_t m = 0; m < k; ++m)
      if (remap[m] >= 0 && (e.marks & (MarkSet(1) << m))) nm |= MarkSet(1) << remap[m];
    e.marks = nm;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Forward-bisimulation quotient

Tgba bisim_quotient(const Tgba& a) {
  if (a.num_states <= 1) return a;
  std::vector<std::uint32_t> block(a.num_states, 0);
  auto out = a.out_index();
  std::uint32_t num_blocks = 1;
  while (true) {
    // Signature: merged outgoing (dst block, marks) -> guard union.
    std::map<std::vector<std::uint64_t>, std::uint32_t> sig_to_block;
    std::vector<std::uint32_t> next_block(a.num_states);
    for (std::uint32_t s = 0; s < a.num_states; ++s) {
      std::map<std::pair<std::uint32_t, MarkSet>, Guard> merged;
      for (std::uint32_t ei : out[s]) {
        const TgbaEdge& e = a.edges[ei];
        merged[{block[e.dst], e.marks}] |= e.guard;
      }
      std::vector<std::uint64_t> sig;
      sig.push_back(block[s]);  // refinement only (blocks never merge back)
      for (auto& [key, g] : merged) {
        sig.push_back(key.first);
        sig.push_back(key.second);
        sig.push_back(g);
      }
      auto [it, fresh] =
          sig_to_block.emplace(std::move(sig), static_cast<std::uint32_t>(sig_to_block.size()));
      next_block[s] = it->second;
      (void)fresh;
    }
    std::uint32_t n = static_cast<std::uint32_t>(sig_to_block.size());
    if (n == num_blocks) break;
    num_blocks = n;
    block = std::move(next_block);
  }
  if (num_blocks == a.num_states) return a;

  // Deterministic block numbering by first occurrence.
  std::vector<std::uint32_t> renum(num_blocks, ~0u);
  std::uint32_t next_id = 0;
  for (std::uint32_t s = 0; s < a.num_states; ++s)
    if (renum[block[s]] == ~0u) renum[block[s]] = next_id++;

  Tgba r;
  r.ap = a.ap;
  r.acceptance_count = a.acceptance_count;
  r.num_states = num_blocks;
  r.initial = renum[block[a.initial]];
  std::map<std::tuple<std::uint32_t, std::uint32_t, MarkSet>, Guard> merged;
  for (const TgbaEdge& e : a.edges)
    merged[{renum[block[e.src]], renum[block[e.dst]], e.marks}] |= e.guard;
  for (auto& [key, g] : merged)
    r.edges.push_back({std::get<0>(key), std::get<1>(key), g, std::get<2>(key)});
  return r;
}

}  // namespace stutterkit
