#include "stutterkit/ltl.hpp"

#include <cctype>
#include <functional>
#include <map>

namespace stutterkit {

namespace {

std::size_t hash_mix(std::size_t a, std::size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

}  // namespace

Ltl Ltl::make(LtlOp op, const std::string& atom, Ltl lhs, Ltl rhs) {
  auto n = std::make_shared<LtlNode>();
  n->op = op;
  n->atom = atom;
  n->lhs = lhs.node_;
  n->rhs = rhs.node_;
  std::size_t h = static_cast<std::size_t>(op) * 0x100000001b3ULL;
  if (!atom.empty()) h = hash_mix(h, std::hash<std::string>{}(atom));
  if (n->lhs) h = hash_mix(h, n->lhs->hash);
  if (n->rhs) h = hash_mix(h, n->rhs->hash);
  n->hash = h;
  return Ltl(std::move(n));
}

Ltl Ltl::tt() { return make(LtlOp::True, "", Ltl(), Ltl()); }
Ltl Ltl::ff() { return make(LtlOp::False, "", Ltl(), Ltl()); }
Ltl Ltl::atom(const std::string& name) { return make(LtlOp::Atom, name, Ltl(), Ltl()); }
Ltl Ltl::make_not(Ltl f) { return make(LtlOp::Not, "", f, Ltl()); }
Ltl Ltl::make_and(Ltl a, Ltl b) { return make(LtlOp::And, "", a, b); }
Ltl Ltl::make_or(Ltl a, Ltl b) { return make(LtlOp::Or, "", a, b); }
Ltl Ltl::make_implies(Ltl a, Ltl b) { return make(LtlOp::Implies, "", a, b); }
Ltl Ltl::make_next(Ltl f) { return make(LtlOp::Next, "", f, Ltl()); }
Ltl Ltl::make_until(Ltl a, Ltl b) { return make(LtlOp::Until, "", a, b); }
Ltl Ltl::make_release(Ltl a, Ltl b) { return make(LtlOp::Release, "", a, b); }
Ltl Ltl::make_eventually(Ltl f) { return make(LtlOp::Eventually, "", f, Ltl()); }
Ltl Ltl::make_globally(Ltl f) { return make(LtlOp::Globally, "", f, Ltl()); }

static int cmp(const LtlNode* a, const LtlNode* b) {
  if (a == b) return 0;
  if (!a) return -1;
  if (!b) return 1;
  if (a->op != b->op) return a->op < b->op ? -1 : 1;
  if (int c = a->atom.compare(b->atom)) return c < 0 ? -1 : 1;
  if (int c = cmp(a->lhs.get(), b->lhs.get())) return c;
  return cmp(a->rhs.get(), b->rhs.get());
}

bool Ltl::operator==(const Ltl& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  if (node_->hash != o.node_->hash) return false;
  return cmp(node_.get(), o.node_.get()) == 0;
}

bool Ltl::operator<(const Ltl& o) const { return cmp(node_.get(), o.node_.get()) < 0; }

namespace {

int precedence(LtlOp op) {
  switch (op) {
    case LtlOp::Implies: return 1;
    case LtlOp::Or: return 2;
    case LtlOp::And: return 3;
    case LtlOp::Until:
    case LtlOp::Release: return 4;
    default: return 5;
  }
}

void print(const Ltl& f, int ctx, std::string& out) {
  int p = precedence(f.op());
  switch (f.op()) {
    case LtlOp::True: out += "true"; return;
    case LtlOp::False: out += "false"; return;
    case LtlOp::Atom: out += f.atom_name(); return;
    case LtlOp::Not: out += "!"; print(f.left(), 5, out); return;
    case LtlOp::Next: out += "X "; print(f.left(), 5, out); return;
    case LtlOp::Eventually: out += "F "; print(f.left(), 5, out); return;
    case LtlOp::Globally: out += "G "; print(f.left(), 5, out); return;
    default: break;
  }
  bool paren = p < ctx;
  if (paren) out += "(";
  const char* sym = nullptr;
  bool right_assoc = false;
  switch (f.op()) {
    case LtlOp::Implies: sym = " -> "; right_assoc = true; break;
    case LtlOp::Or: sym = " || "; break;
    case LtlOp::And: sym = " && "; break;
    case LtlOp::Until: sym = " U "; right_assoc = true; break;
    case LtlOp::Release: sym = " R "; right_assoc = true; break;
    default: break;
  }
  print(f.left(), right_assoc ? p + 1 : p, out);
  out += sym;
  print(f.right(), right_assoc ? p : p + 1, out);
  if (paren) out += ")";
}

}  // namespace

std::string Ltl::to_string() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  enum Kind { LParen, RParen, Bang, AndAnd, OrOr, Arrow, Equiv, Word, End } kind;
  std::string text;   // Word only
  std::size_t offset;
};

struct Lexer {
  const std::string& s;
  std::size_t pos = 0;
  Token next() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    std::size_t at = pos;
    if (pos >= s.size()) return {Token::End, "", at};
    char c = s[pos];
    if (c == '(') { ++pos; return {Token::LParen, "", at}; }
    if (c == ')') { ++pos; return {Token::RParen, "", at}; }
    if (c == '!') { ++pos; return {Token::Bang, "", at}; }
    if (c == '&') {
      if (pos + 1 < s.size() && s[pos + 1] == '&') { pos += 2; return {Token::AndAnd, "", at}; }
      throw parse_error("expected '&&'", at);
    }
    if (c == '|') {
      if (pos + 1 < s.size() && s[pos + 1] == '|') { pos += 2; return {Token::OrOr, "", at}; }
      throw parse_error("expected '||'", at);
    }
    if (c == '-') {
      if (pos + 1 < s.size() && s[pos + 1] == '>') { pos += 2; return {Token::Arrow, "", at}; }
      throw parse_error("expected '->'", at);
    }
    if (c == '[') {
      if (pos + 1 < s.size() && s[pos + 1] == ']') { pos += 2; return {Token::Word, "G", at}; }
      throw parse_error("expected '[]'", at);
    }
    if (c == '<') {
      if (pos + 1 < s.size() && s[pos + 1] == '>') { pos += 2; return {Token::Word, "F", at}; }
      if (pos + 2 < s.size() && s[pos + 1] == '-' && s[pos + 2] == '>') {
        pos += 3;
        return {Token::Equiv, "", at};
      }
      throw parse_error("expected '<>' or '<->'", at);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
        ++pos;
      return {Token::Word, s.substr(b, pos - b), at};
    }
    throw parse_error(std::string("unknown token '") + c + "'", at);
  }
};

bool is_reserved(const std::string& w) {
  return w == "G" || w == "F" || w == "X" || w == "U" || w == "R" || w == "W" ||
         w == "true" || w == "false";
}

struct Parser {
  Lexer lex;
  Token tok;
  explicit Parser(const std::string& s) : lex{s} { tok = lex.next(); }
  void advance() { tok = lex.next(); }

  Ltl parse_implies() {
    Ltl lhs = parse_or();
    if (tok.kind == Token::Arrow) {
      advance();
      return Ltl::make_implies(lhs, parse_implies());
    }
    if (tok.kind == Token::Equiv) {
      advance();
      Ltl rhs = parse_implies();
      return Ltl::make_and(Ltl::make_implies(lhs, rhs), Ltl::make_implies(rhs, lhs));
    }
    return lhs;
  }
  Ltl parse_or() {
    Ltl f = parse_and();
    while (tok.kind == Token::OrOr) {
      advance();
      f = Ltl::make_or(f, parse_and());
    }
    return f;
  }
  Ltl parse_and() {
    Ltl f = parse_until();
    while (tok.kind == Token::AndAnd) {
      advance();
      f = Ltl::make_and(f, parse_until());
    }
    return f;
  }
  Ltl parse_until() {
    Ltl lhs = parse_unary();
    if (tok.kind == Token::Word &&
        (tok.text == "U" || tok.text == "R" || tok.text == "W")) {
      std::string op = tok.text;
      advance();
      Ltl rhs = parse_until();
      if (op == "U") return Ltl::make_until(lhs, rhs);
      if (op == "R") return Ltl::make_release(lhs, rhs);
      // weak until: a W b = (a U b) || G a
      return Ltl::make_or(Ltl::make_until(lhs, rhs), Ltl::make_globally(lhs));
    }
    return lhs;
  }
  Ltl parse_unary() {
    switch (tok.kind) {
      case Token::Bang: {
        advance();
        return Ltl::make_not(parse_unary());
      }
      case Token::LParen: {
        advance();
        Ltl f = parse_implies();
        if (tok.kind != Token::RParen) throw parse_error("expected ')'", tok.offset);
        advance();
        return f;
      }
      case Token::Word: {
        std::string w = tok.text;
        std::size_t at = tok.offset;
        advance();
        if (w == "X") return Ltl::make_next(parse_unary());
        if (w == "F") return Ltl::make_eventually(parse_unary());
        if (w == "G") return Ltl::make_globally(parse_unary());
        if (w == "true") return Ltl::tt();
        if (w == "false") return Ltl::ff();
        if (is_reserved(w))
          throw parse_error("operator '" + w + "' needs a left operand", at);
        return Ltl::atom(w);
      }
      default:
        throw parse_error("expected formula", tok.offset);
    }
  }
};

}  // namespace

Ltl parse_ltl(const std::string& text) {
  Parser p(text);
  Ltl f = p.parse_implies();
  if (p.tok.kind != Token::End) throw parse_error("trailing input", p.tok.offset);
  return f;
}

// ---------------------------------------------------------------------------
// Negation normal form

Ltl to_nnf(Ltl f) {
  switch (f.op()) {
    case LtlOp::True:
    case LtlOp::False:
    case LtlOp::Atom: return f;
    case LtlOp::Not: return negate_to_nnf(f.left());
    case LtlOp::And: return Ltl::make_and(to_nnf(f.left()), to_nnf(f.right()));
    case LtlOp::Or: return Ltl::make_or(to_nnf(f.left()), to_nnf(f.right()));
    case LtlOp::Implies: return Ltl::make_or(negate_to_nnf(f.left()), to_nnf(f.right()));
    case LtlOp::Next: return Ltl::make_next(to_nnf(f.left()));
    case LtlOp::Until: return Ltl::make_until(to_nnf(f.left()), to_nnf(f.right()));
    case LtlOp::Release: return Ltl::make_release(to_nnf(f.left()), to_nnf(f.right()));
    case LtlOp::Eventually: return Ltl::make_eventually(to_nnf(f.left()));
    case LtlOp::Globally: return Ltl::make_globally(to_nnf(f.left()));
  }
  return f;
}

Ltl negate_to_nnf(Ltl f) {
  switch (f.op()) {
    case LtlOp::True: return Ltl::ff();
    case LtlOp::False: return Ltl::tt();
    case LtlOp::Atom: return Ltl::make_not(f);
    case LtlOp::Not: return to_nnf(f.left());
    case LtlOp::And: return Ltl::make_or(negate_to_nnf(f.left()), negate_to_nnf(f.right()));
    case LtlOp::Or: return Ltl::make_and(negate_to_nnf(f.left()), negate_to_nnf(f.right()));
    case LtlOp::Implies:
      return Ltl::make_and(to_nnf(f.left()), negate_to_nnf(f.right()));
    case LtlOp::Next: return Ltl::make_next(negate_to_nnf(f.left()));
    case LtlOp::Until:
      return Ltl::make_release(negate_to_nnf(f.left()), negate_to_nnf(f.right()));
    case LtlOp::Release:
      return Ltl::make_until(negate_to_nnf(f.left()), negate_to_nnf(f.right()));
    case LtlOp::Eventually: return Ltl::make_globally(negate_to_nnf(f.left()));
    case LtlOp::Globally: return Ltl::make_eventually(negate_to_nnf(f.left()));
  }
  return f;
}

static void collect_atoms(const Ltl& f, std::set<std::string>& out) {
  if (f.op() == LtlOp::Atom) {
    out.insert(f.atom_name());
    return;
  }
  if (f.left().valid()) collect_atoms(f.left(), out);
  if (f.right().valid()) collect_atoms(f.right(), out);
}

std::set<std::string> atoms_of(Ltl f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

static void collect_subformulas(const Ltl& f, std::set<Ltl>& out) {
  if (!out.insert(f).second) return;
  if (f.left().valid()) collect_subformulas(f.left(), out);
  if (f.right().valid()) collect_subformulas(f.right(), out);
}

std::size_t closure_size(Ltl f) {
  std::set<Ltl> subs;
  collect_subformulas(to_nnf(f), subs);
  return subs.size();
}

}  // namespace stutterkit
