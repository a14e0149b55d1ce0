#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "stutterkit/limits.hpp"

namespace stutterkit {

// LTL formulas in negation normal form flavour: negation may appear anywhere
// in the input, but `negate_to_nnf` pushes it onto atoms using the
// U/R duality.  Nodes are immutable and shared.
enum class LtlOp : std::uint8_t {
  True, False, Atom, Not, And, Or, Implies, Next, Until, Release, Eventually, Globally
};

class Ltl;

struct LtlNode {
  LtlOp op;
  std::string atom;       // Atom only
  std::shared_ptr<const LtlNode> lhs, rhs;  // unary: lhs only
  std::size_t hash;
};

// Value-semantics handle on a shared immutable node.
class Ltl {
 public:
  Ltl() = default;
  static Ltl tt();
  static Ltl ff();
  static Ltl atom(const std::string& name);
  static Ltl make_not(Ltl f);
  static Ltl make_and(Ltl a, Ltl b);
  static Ltl make_or(Ltl a, Ltl b);
  static Ltl make_implies(Ltl a, Ltl b);
  static Ltl make_next(Ltl f);
  static Ltl make_until(Ltl a, Ltl b);
  static Ltl make_release(Ltl a, Ltl b);
  static Ltl make_eventually(Ltl f);
  static Ltl make_globally(Ltl f);

  LtlOp op() const { return node_->op; }
  const std::string& atom_name() const { return node_->atom; }
  Ltl left() const { return Ltl(node_->lhs); }
  Ltl right() const { return Ltl(node_->rhs); }
  bool valid() const { return node_ != nullptr; }

  std::size_t hash() const { return node_->hash; }
  bool operator==(const Ltl& o) const;
  bool operator!=(const Ltl& o) const { return !(*this == o); }
  bool operator<(const Ltl& o) const;  // arbitrary total order for map keys

  std::string to_string() const;

 private:
  explicit Ltl(std::shared_ptr<const LtlNode> n) : node_(std::move(n)) {}
  static Ltl make(LtlOp op, const std::string& atom, Ltl lhs, Ltl rhs);
  std::shared_ptr<const LtlNode> node_;
};

// Grammar (precedence low to high): -> right-associative, ||, &&, binary
// U/R/W right-associative, unary !/X/F/G, atoms/true/false/parens.
// Symbolic aliases: <> = F, [] = G, -> and <-> expand at parse time,
// W rewrites to (a U b) || G a.  Atom names: [a-zA-Z_][a-zA-Z0-9_]* minus
// reserved words.
Ltl parse_ltl(const std::string& text);

// Negation pushed to atoms (input need not be negation-free).
Ltl negate_to_nnf(Ltl f);
// Same rewriting applied without the outer negation.
Ltl to_nnf(Ltl f);

std::set<std::string> atoms_of(Ltl f);
// Number of distinct subformulas (after NNF), used for evaluation bounds.
std::size_t closure_size(Ltl f);

}  // namespace stutterkit
