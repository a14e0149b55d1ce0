#include "stutterkit/translate.hpp"

#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace stutterkit {

namespace {

using Obligations = std::set<Ltl>;

// Collect Until/Eventually subformulas in deterministic (pre-order) order.
void collect_untils(const Ltl& f, std::vector<Ltl>& out, std::set<Ltl>& seen) {
  if (seen.count(f)) return;
  seen.insert(f);
  switch (f.op()) {
    case LtlOp::Until:
    case LtlOp::Eventually:
      out.push_back(f);
      break;
    default:
      break;
  }
  switch (f.op()) {
    case LtlOp::And:
    case LtlOp::Or:
    case LtlOp::Until:
    case LtlOp::Release:
      collect_untils(f.left(), out, seen);
      collect_untils(f.right(), out, seen);
      break;
    case LtlOp::Next:
    case LtlOp::Eventually:
    case LtlOp::Globally:
    case LtlOp::Not:
      collect_untils(f.left(), out, seen);
      break;
    default:
      break;
  }
}

struct Translator {
  std::vector<std::string> ap;
  std::map<Ltl, std::uint32_t> mark_of;
  std::uint32_t k = 0;
  const ExecLimits& lim;

  explicit Translator(const ExecLimits& l) : lim(l) {}

  std::uint32_t atom_bit(const std::string& name) const {
    for (std::uint32_t i = 0; i < ap.size(); ++i)
      if (ap[i] == name) return i;
    throw std::logic_error("unknown atom in translation");
  }

  // All ways to satisfy the pending obligations now, under valuation v:
  // (next-step obligations, postponed marks).
  void satisfy(std::vector<Ltl>& todo, std::set<Ltl>& done, Obligations& next,
               MarkSet postponed, Valuation v,
               std::set<std::pair<Obligations, MarkSet>>& out) {
    while (true) {
      if (todo.empty()) {
        out.emplace(next, postponed);
        return;
      }
      Ltl f = todo.back();
      todo.pop_back();
      if (done.count(f)) continue;
      done.insert(f);
      switch (f.op()) {
        case LtlOp::True:
          continue;
        case LtlOp::False:
          return;  // dead branch
        case LtlOp::Atom:
          if (v & (Valuation(1) << atom_bit(f.atom_name()))) continue;
          return;
        case LtlOp::Not:  // NNF: operand is an atom
          if (f.left().op() != LtlOp::Atom)
            throw std::logic_error("translation expects negation normal form");
          if (v & (Valuation(1) << atom_bit(f.left().atom_name()))) return;
          continue;
        case LtlOp::And:
          todo.push_back(f.left());
          todo.push_back(f.right());
          continue;
        case LtlOp::Or: {
          auto todo2 = todo;
          auto done2 = done;
          auto next2 = next;
          todo2.push_back(f.left());
          satisfy(todo2, done2, next2, postponed, v, out);
          todo.push_back(f.right());
          continue;
        }
        case LtlOp::Next:
          next.insert(f.left());
          continue;
        case LtlOp::Until: {
          // Either the right side holds now, or the left side holds and the
          // until is postponed to the next step.
          auto todo2 = todo;
          auto done2 = done;
          auto next2 = next;
          todo2.push_back(f.right());
          satisfy(todo2, done2, next2, postponed, v, out);
          todo.push_back(f.left());
          next.insert(f);
          postponed |= MarkSet(1) << mark_of.at(f);
          continue;
        }
        case LtlOp::Eventually: {
          auto todo2 = todo;
          auto done2 = done;
          auto next2 = next;
          todo2.push_back(f.left());
          satisfy(todo2, done2, next2, postponed, v, out);
          next.insert(f);
          postponed |= MarkSet(1) << mark_of.at(f);
          continue;
        }
        case LtlOp::Release: {
          // Either both sides hold now (released), or the right side holds
          // and the release carries over.
          auto todo2 = todo;
          auto done2 = done;
          auto next2 = next;
          todo2.push_back(f.left());
          todo2.push_back(f.right());
          satisfy(todo2, done2, next2, postponed, v, out);
          todo.push_back(f.right());
          next.insert(f);
          continue;
        }
        case LtlOp::Globally:
          todo.push_back(f.left());
          next.insert(f);
          continue;
        case LtlOp::Implies:
          throw std::logic_error("translation expects negation normal form");
      }
    }
  }
};

}  // namespace

Tgba translate(const Ltl& f, const ExecLimits& lim) {
  Ltl g = to_nnf(f);
  Translator tr(lim);
  for (const auto& name : atoms_of(g)) tr.ap.push_back(name);
  if (tr.ap.size() > kMaxAp)
    throw resource_error("formula has more than " + std::to_string(kMaxAp) + " atoms");
  {
    std::vector<Ltl> untils;
    std::set<Ltl> seen;
    collect_untils(g, untils, seen);
    for (const auto& u : untils) tr.mark_of.emplace(u, tr.k++);
    if (tr.k > kMaxMarks) throw resource_error("too many Until subformulas");
  }

  Tgba a;
  a.ap = tr.ap;
  a.acceptance_count = tr.k;

  std::map<Obligations, std::uint32_t> ids;
  std::deque<const Obligations*> todo;
  auto intern = [&](const Obligations& s) {
    auto [it, fresh] = ids.emplace(s, static_cast<std::uint32_t>(ids.size()));
    if (fresh) {
      todo.push_back(&it->first);
      lim.check_states(ids.size(), "translate");
    }
    return it->second;
  };
  a.initial = intern({g});
  MarkSet all = a.all_marks();
  while (!todo.empty()) {
    lim.check_deadline("translate");
    const Obligations& s = *todo.front();
    todo.pop_front();
    std::uint32_t src = ids.at(s);
    for (Valuation v = 0; v < (Valuation(1) << tr.ap.size()); ++v) {
      std::set<std::pair<Obligations, MarkSet>> branches;
      std::vector<Ltl> work(s.begin(), s.end());
      std::set<Ltl> done;
      Obligations next;
      tr.satisfy(work, done, next, 0, v, branches);
      for (const auto& [nxt, postponed] : branches) {
        std::uint32_t dst = intern(nxt);
        a.edges.push_back({src, dst, Guard(1) << v, all & ~postponed});
      }
    }
  }
  a.num_states = static_cast<std::uint32_t>(ids.size());

  // Merge letters into guards for identical (src, dst, marks).
  std::map<std::tuple<std::uint32_t, std::uint32_t, MarkSet>, Guard> merged;
  for (const TgbaEdge& e : a.edges) merged[{e.src, e.dst, e.marks}] |= e.guard;
  a.edges.clear();
  for (auto& [key, guard] : merged)
    a.edges.push_back({std::get<0>(key), std::get<1>(key), guard, std::get<2>(key)});

  return bisim_quotient(trim(a));
}

}  // namespace stutterkit
