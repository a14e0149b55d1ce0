#include "stutterkit/petri.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace stutterkit {

std::vector<std::uint32_t> PetriNet::consumers(std::uint32_t p) const {
  std::vector<std::uint32_t> r;
  for (std::uint32_t t = 0; t < num_transitions(); ++t)
    if (w_minus[p][t] > 0) r.push_back(t);
  return r;
}

std::vector<std::uint32_t> PetriNet::feeders(std::uint32_t p) const {
  std::vector<std::uint32_t> r;
  for (std::uint32_t t = 0; t < num_transitions(); ++t)
    if (w_plus[p][t] > 0) r.push_back(t);
  return r;
}

bool PetriNet::enabled(const Marking& m, std::uint32_t t) const {
  for (std::uint32_t p = 0; p < num_places(); ++p)
    if (m[p] < w_minus[p][t]) return false;
  return true;
}

Marking PetriNet::fire(const Marking& m, std::uint32_t t) const {
  Marking r = m;
  for (std::uint32_t p = 0; p < num_places(); ++p)
    r[p] = r[p] - w_minus[p][t] + w_plus[p][t];
  return r;
}

namespace {

std::int64_t eval_lin(const std::vector<std::pair<std::int64_t, std::uint32_t>>& terms,
                      std::int64_t constant, const Marking& m) {
  std::int64_t v = constant;
  for (const auto& [coef, p] : terms) v += coef * static_cast<std::int64_t>(m[p]);
  return v;
}

bool eval_cmp(std::int64_t l, CmpOp op, std::int64_t r) {
  switch (op) {
    case CmpOp::Lt: return l < r;
    case CmpOp::Le: return l <= r;
    case CmpOp::Eq: return l == r;
    case CmpOp::Ge: return l >= r;
    case CmpOp::Gt: return l > r;
  }
  return false;
}

std::uint32_t place_index(const PetriNet& net, const std::string& name) {
  for (std::uint32_t p = 0; p < net.num_places(); ++p)
    if (net.places[p] == name) return p;
  throw std::invalid_argument("binding references unknown place '" + name + "'");
}

}  // namespace

bool CompiledPred::eval(const Marking& m) const {
  switch (kind) {
    case Pred::Kind::Cmp:
      return eval_cmp(eval_lin(lhs_terms, lhs_const, m), op,
                      eval_lin(rhs_terms, rhs_const, m));
    case Pred::Kind::And: return a->eval(m) && b->eval(m);
    case Pred::Kind::Or: return a->eval(m) || b->eval(m);
    case Pred::Kind::Not: return !a->eval(m);
  }
  return false;
}

CompiledPred compile_pred(const Pred& pred, const PetriNet& net) {
  CompiledPred c;
  c.kind = pred.kind;
  if (pred.kind == Pred::Kind::Cmp) {
    c.op = pred.op;
    c.lhs_const = pred.lhs.constant;
    c.rhs_const = pred.rhs.constant;
    // Zero-coefficient terms have no semantic effect and may name places that
    // a reduction has removed; drop them instead of resolving.
    for (const LinTerm& t : pred.lhs.terms)
      if (t.coef != 0) c.lhs_terms.push_back({t.coef, place_index(net, t.place)});
    for (const LinTerm& t : pred.rhs.terms)
      if (t.coef != 0) c.rhs_terms.push_back({t.coef, place_index(net, t.place)});
  } else {
    c.a = std::make_shared<CompiledPred>(compile_pred(*pred.a, net));
    if (pred.b) c.b = std::make_shared<CompiledPred>(compile_pred(*pred.b, net));
  }
  return c;
}

bool eval_pred(const Pred& pred, const PetriNet& net, const Marking& m) {
  return compile_pred(pred, net).eval(m);
}

// ---------------------------------------------------------------------------
// Net text format

namespace {

struct ExprParser {
  const std::string& s;
  std::size_t base;  // byte offset of s[0] in the whole input
  std::size_t pos = 0;
  const std::map<std::string, std::uint32_t>& places;
  const std::string& atom_name;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& what, std::size_t at) {
    throw parse_error(what + " in atom '" + atom_name + "'", base + at);
  }
  bool eat(const char* tok) {
    skip_ws();
    std::size_t n = std::char_traits<char>::length(tok);
    if (s.compare(pos, n, tok) == 0) {
      pos += n;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  std::int64_t integer() {
    skip_ws();
    std::size_t start = pos;
    bool neg = pos < s.size() && s[pos] == '-';
    if (neg) ++pos;
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("expected integer", start);
    std::int64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos] - '0');
      if (v > 1'000'000'000) fail("integer too large", start);
      ++pos;
    }
    return neg ? -v : v;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' ||
            s[pos] == '.' || s[pos] == '\''))
      ++pos;
    if (pos == start) fail("expected name", start);
    return s.substr(start, pos - start);
  }

  // m(NAME), or INT, or INT * m(NAME)
  void term(LinExpr& e) {
    skip_ws();
    std::size_t start = pos;
    if (peek() == 'm' && pos + 1 < s.size() && s[pos + 1] == '(') {
      pos += 2;
      std::string name = ident();
      if (!eat(")")) fail("expected ')'", pos);
      if (!places.count(name)) fail("undeclared place '" + name + "'", start);
      e.terms.push_back({1, name});
      return;
    }
    std::int64_t v = integer();
    if (eat("*")) {
      if (!eat("m") || !eat("(")) fail("expected m(PLACE) after '*'", pos);
      std::string name = ident();
      if (!eat(")")) fail("expected ')'", pos);
      if (!places.count(name)) fail("undeclared place '" + name + "'", start);
      e.terms.push_back({v, name});
    } else {
      e.constant += v;
    }
  }

  LinExpr linexpr() {
    LinExpr e;
    term(e);
    while (eat("+")) term(e);
    return e;
  }

  PredPtr comparison() {
    auto p = std::make_shared<Pred>();
    p->kind = Pred::Kind::Cmp;
    p->lhs = linexpr();
    skip_ws();
    if (eat("<=")) p->op = CmpOp::Le;
    else if (eat(">=")) p->op = CmpOp::Ge;
    else if (eat("<")) p->op = CmpOp::Lt;
    else if (eat(">")) p->op = CmpOp::Gt;
    else if (eat("=")) p->op = CmpOp::Eq;
    else fail("expected comparison operator", pos);
    p->rhs = linexpr();
    return p;
  }

  PredPtr unary() {
    if (eat("!")) {
      auto p = std::make_shared<Pred>();
      p->kind = Pred::Kind::Not;
      p->a = unary();
      return p;
    }
    if (peek() == '(') {
      ++pos;
      PredPtr p = bool_or();
      if (!eat(")")) fail("expected ')'", pos);
      return p;
    }
    return comparison();
  }

  PredPtr bool_and() {
    PredPtr l = unary();
    while (eat("&&")) {
      auto p = std::make_shared<Pred>();
      p->kind = Pred::Kind::And;
      p->a = l;
      p->b = unary();
      l = p;
    }
    return l;
  }

  PredPtr bool_or() {
    PredPtr l = bool_and();
    while (eat("||")) {
      auto p = std::make_shared<Pred>();
      p->kind = Pred::Kind::Or;
      p->a = l;
      p->b = bool_and();
      l = p;
    }
    return l;
  }

  PredPtr parse() {
    PredPtr p = bool_or();
    skip_ws();
    if (pos < s.size()) fail("trailing input", pos);
    return p;
  }
};

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::uint32_t parse_weight(const std::string& txt, std::size_t off) {
  std::size_t digits = txt.size() - (txt.empty() || txt[0] != '-' ? 0 : 1);
  if (digits == 0 || digits > 9)
    throw parse_error("malformed weight '" + txt + "'", off);
  for (std::size_t i = txt.size() - digits; i < txt.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(txt[i])))
      throw parse_error("malformed weight '" + txt + "'", off);
  long v = std::stol(txt);
  if (v < 0) throw parse_error("negative weight '" + txt + "'", off);
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::pair<PetriNet, PropertyBinding> parse_net(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '<')
    return {parse_pnml(text), PropertyBinding{}};

  PetriNet net;
  PropertyBinding binding;
  std::map<std::string, std::uint32_t> place_ix, trans_ix;

  auto add_arc_list = [&](const std::string& list, std::uint32_t t, bool pre,
                          const std::string& tname, std::size_t off) {
    if (list.empty()) return;
    std::size_t i = 0;
    while (i <= list.size()) {
      std::size_t comma = list.find(',', i);
      if (comma == std::string::npos) comma = list.size();
      std::string entry = list.substr(i, comma - i);
      i = comma + 1;
      if (entry.empty())
        throw parse_error("empty entry in arc list of transition '" + tname + "'", off);
      std::size_t colon = entry.find(':');
      std::string pname = entry.substr(0, colon == std::string::npos ? entry.size() : colon);
      std::uint32_t w = 1;
      if (colon != std::string::npos) w = parse_weight(entry.substr(colon + 1), off);
      auto it = place_ix.find(pname);
      if (it == place_ix.end())
        throw parse_error("undeclared place '" + pname + "' in transition '" + tname + "'",
                          off);
      (pre ? net.w_minus : net.w_plus)[it->second][t] += w;
    }
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    const std::size_t line_off = pos;
    pos = eol + 1;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);

    std::vector<std::string> tok = split_ws(line);
    if (tok.empty()) continue;

    if (tok[0] == "place") {
      if (tok.size() != 2 && !(tok.size() == 4 && tok[2] == "init"))
        throw parse_error("expected 'place NAME [init N]'", line_off);
      if (place_ix.count(tok[1]))
        throw parse_error("duplicate place name '" + tok[1] + "'", line_off);
      std::uint32_t m = 0;
      if (tok.size() == 4) m = parse_weight(tok[3], line_off);
      place_ix[tok[1]] = net.num_places();
      net.places.push_back(tok[1]);
      net.w_minus.emplace_back(net.num_transitions(), 0);
      net.w_plus.emplace_back(net.num_transitions(), 0);
      net.m0.push_back(m);
    } else if (tok[0] == "trans") {
      if (tok.size() < 2) throw parse_error("expected 'trans NAME ...'", line_off);
      if (trans_ix.count(tok[1]))
        throw parse_error("duplicate transition name '" + tok[1] + "'", line_off);
      std::uint32_t t = net.num_transitions();
      trans_ix[tok[1]] = t;
      net.transitions.push_back(tok[1]);
      for (std::uint32_t p = 0; p < net.num_places(); ++p) {
        net.w_minus[p].push_back(0);
        net.w_plus[p].push_back(0);
      }
      std::string in_list, out_list;
      std::string* cur = nullptr;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        if (tok[i] == "in") cur = &in_list;
        else if (tok[i] == "out") cur = &out_list;
        else if (cur) *cur += tok[i];
        else
          throw parse_error("expected 'in' or 'out' in transition '" + tok[1] + "'",
                            line_off);
      }
      add_arc_list(in_list, t, true, tok[1], line_off);
      add_arc_list(out_list, t, false, tok[1], line_off);
    } else if (tok[0] == "atom") {
      if (tok.size() < 3 || tok[2] != ":=")
        throw parse_error("expected 'atom NAME := EXPR'", line_off);
      if (binding.atoms.count(tok[1]))
        throw parse_error("duplicate atom name '" + tok[1] + "'", line_off);
      std::size_t assign = line.find(":=");
      std::string expr = line.substr(assign + 2);
      ExprParser ep{expr, line_off + assign + 2, 0, place_ix, tok[1]};
      binding.atoms[tok[1]] = ep.parse();
    } else {
      throw parse_error("unknown directive '" + tok[0] + "'", line_off);
    }
  }
  return {net, binding};
}

// ---------------------------------------------------------------------------
// Writing

namespace {

void write_linexpr(std::ostream& os, const LinExpr& e) {
  bool first = true;
  for (const LinTerm& t : e.terms) {
    if (!first) os << " + ";
    if (t.coef == 1)
      os << "m(" << t.place << ")";
    else
      os << t.coef << "*m(" << t.place << ")";
    first = false;
  }
  if (e.constant != 0 || first) {
    if (!first) os << " + ";
    os << e.constant;
  }
}

const char* cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ge: return ">=";
    default: return ">";
  }
}

void write_pred(std::ostream& os, const Pred& p) {
  switch (p.kind) {
    case Pred::Kind::Cmp:
      write_linexpr(os, p.lhs);
      os << " " << cmp_text(p.op) << " ";
      write_linexpr(os, p.rhs);
      break;
    case Pred::Kind::Not:
      os << "!(";
      write_pred(os, *p.a);
      os << ")";
      break;
    case Pred::Kind::And:
    case Pred::Kind::Or:
      os << "(";
      write_pred(os, *p.a);
      os << (p.kind == Pred::Kind::And ? ") && (" : ") || (");
      write_pred(os, *p.b);
      os << ")";
      break;
  }
}

void write_arc_list(std::ostream& os, const PetriNet& net, std::uint32_t t,
                    const std::vector<std::vector<std::uint32_t>>& w, const char* kw) {
  bool any = false;
  for (std::uint32_t p = 0; p < net.num_places(); ++p) {
    if (!w[p][t]) continue;
    os << (any ? "," : kw) << net.places[p];
    if (w[p][t] != 1) os << ":" << w[p][t];
    any = true;
  }
}

}  // namespace

std::string write_net(const PetriNet& net, const PropertyBinding& binding) {
  std::ostringstream os;
  for (std::uint32_t p = 0; p < net.num_places(); ++p) {
    os << "place " << net.places[p];
    if (net.m0[p]) os << " init " << net.m0[p];
    os << "\n";
  }
  for (std::uint32_t t = 0; t < net.num_transitions(); ++t) {
    os << "trans " << net.transitions[t];
    write_arc_list(os, net, t, net.w_minus, " in ");
    write_arc_list(os, net, t, net.w_plus, " out ");
    os << "\n";
  }
  for (const auto& [name, pred] : binding.atoms) {
    os << "atom " << name << " := ";
    write_pred(os, *pred);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Support, agglomerations, reduction

namespace {

void collect_support(const Pred& p, std::set<std::string>& names) {
  if (p.kind == Pred::Kind::Cmp) {
    for (const LinTerm& t : p.lhs.terms)
      if (t.coef != 0) names.insert(t.place);
    for (const LinTerm& t : p.rhs.terms)
      if (t.coef != 0) names.insert(t.place);
  } else {
    collect_support(*p.a, names);
    if (p.b) collect_support(*p.b, names);
  }
}

}  // namespace

std::pair<std::set<std::uint32_t>, std::set<std::uint32_t>> support_and_invisibles(
    const PetriNet& net, const PropertyBinding& binding) {
  std::set<std::string> names;
  for (const auto& [name, pred] : binding.atoms) collect_support(*pred, names);
  std::set<std::uint32_t> support;
  for (const std::string& n : names) support.insert(place_index(net, n));

  std::set<std::uint32_t> invisibles;
  for (std::uint32_t t = 0; t < net.num_transitions(); ++t) {
    bool inv = true;
    for (std::uint32_t p : support)
      if (net.w_minus[p][t] != net.w_plus[p][t]) {
        inv = false;
        break;
      }
    if (inv) invisibles.insert(t);
  }
  return {support, invisibles};
}

const char* to_string(AggloKind k) { return k == AggloKind::Pre ? "pre" : "post"; }

bool AggloCheck::shared_ok() const {
  return not_in_support && initially_unmarked && has_feeders && has_consumers &&
         feeders_consumers_distinct && feeders_single_token && consumers_single_token;
}

bool AggloCheck::ok(AggloKind k) const {
  if (!shared_ok()) return false;
  if (k == AggloKind::Pre)
    return feeders_invisible && feeders_single_output && feeders_divergent_free &&
           feeders_quasi_persistent;
  return consumers_invisible && consumers_single_input;
}

std::string AggloCheck::first_failure(AggloKind k) const {
  if (!not_in_support) return "not_in_support";
  if (!initially_unmarked) return "initially_unmarked";
  if (!has_feeders) return "has_feeders";
  if (!has_consumers) return "has_consumers";
  if (!feeders_consumers_distinct) return "feeders_consumers_distinct";
  if (!feeders_single_token) return "feeders_single_token";
  if (!consumers_single_token) return "consumers_single_token";
  if (k == AggloKind::Pre) {
    if (!feeders_invisible) return "feeders_invisible";
    if (!feeders_single_output) return "feeders_single_output";
    if (!feeders_divergent_free) return "feeders_divergent_free";
    if (!feeders_quasi_persistent) return "feeders_quasi_persistent";
  } else {
    if (!consumers_invisible) return "consumers_invisible";
    if (!consumers_single_input) return "consumers_single_input";
  }
  return "";
}

AggloCheck check_agglomeration(const PetriNet& net, std::uint32_t p,
                               const std::set<std::uint32_t>& support,
                               const std::set<std::uint32_t>& invisibles) {
  AggloCheck c;
  const auto fs = net.feeders(p);
  const auto cs = net.consumers(p);

  c.not_in_support = !support.count(p);
  c.initially_unmarked = net.m0[p] == 0;
  c.has_feeders = !fs.empty();
  c.has_consumers = !cs.empty();
  c.feeders_consumers_distinct = true;
  for (std::uint32_t h : fs)
    if (std::binary_search(cs.begin(), cs.end(), h)) c.feeders_consumers_distinct = false;

  c.feeders_single_token = true;
  for (std::uint32_t h : fs)
    if (net.w_plus[p][h] != 1) c.feeders_single_token = false;
  c.consumers_single_token = true;
  for (std::uint32_t f : cs)
    if (net.w_minus[p][f] != 1) c.consumers_single_token = false;

  c.feeders_invisible = true;
  c.feeders_single_output = true;
  c.feeders_divergent_free = true;
  c.feeders_quasi_persistent = true;
  for (std::uint32_t h : fs) {
    if (!invisibles.count(h)) c.feeders_invisible = false;
    bool divergent_free = false;
    for (std::uint32_t q = 0; q < net.num_places(); ++q) {
      if (q != p && net.w_plus[q][h] > 0) c.feeders_single_output = false;
      if (net.w_minus[q][h] > 0) {
        if (net.w_plus[q][h] < net.w_minus[q][h]) divergent_free = true;
        if (net.consumers(q) != std::vector<std::uint32_t>{h})
          c.feeders_quasi_persistent = false;
      }
    }
    if (!divergent_free) c.feeders_divergent_free = false;
  }

  c.consumers_invisible = true;
  c.consumers_single_input = true;
  for (std::uint32_t f : cs) {
    if (!invisibles.count(f)) c.consumers_invisible = false;
    for (std::uint32_t q = 0; q < net.num_places(); ++q)
      if (q != p && net.w_minus[q][f] > 0) c.consumers_single_input = false;
  }
  return c;
}

std::vector<AggloCandidate> find_agglomerations(const PetriNet& net,
                                                const std::set<std::uint32_t>& support,
                                                const std::set<std::uint32_t>& invisibles) {
  std::vector<AggloCandidate> out;
  for (std::uint32_t p = 0; p < net.num_places(); ++p) {
    AggloCheck c = check_agglomeration(net, p, support, invisibles);
    if (c.ok(AggloKind::Pre)) out.push_back({p, AggloKind::Pre});
    if (c.ok(AggloKind::Post)) out.push_back({p, AggloKind::Post});
  }
  return out;
}

PetriNet agglomerate(const PetriNet& net, std::uint32_t p, AggloKind kind,
                     const std::set<std::uint32_t>& support,
                     const std::set<std::uint32_t>& invisibles) {
  if (p >= net.num_places()) throw std::invalid_argument("agglomerate: no such place");
  AggloCheck c = check_agglomeration(net, p, support, invisibles);
  if (!c.ok(kind))
    throw std::invalid_argument(std::string(to_string(kind)) +
                                " agglomeration rejected at place '" + net.places[p] +
                                "': condition " + c.first_failure(kind) + " failed");

  const auto fs = net.feeders(p);
  const auto cs = net.consumers(p);
  std::set<std::uint32_t> removed(fs.begin(), fs.end());
  removed.insert(cs.begin(), cs.end());

  PetriNet r;
  std::vector<std::uint32_t> keep_places;
  for (std::uint32_t q = 0; q < net.num_places(); ++q)
    if (q != p) {
      keep_places.push_back(q);
      r.places.push_back(net.places[q]);
      r.m0.push_back(net.m0[q]);
    }

  std::vector<std::uint32_t> keep_trans;
  for (std::uint32_t t = 0; t < net.num_transitions(); ++t)
    if (!removed.count(t)) {
      keep_trans.push_back(t);
      r.transitions.push_back(net.transitions[t]);
    }
  std::set<std::string> taken(r.transitions.begin(), r.transitions.end());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> fused;
  for (std::uint32_t h : fs)
    for (std::uint32_t f : cs) {
      std::string name = net.transitions[h] + "." + net.transitions[f];
      while (taken.count(name)) name += "'";
      taken.insert(name);
      r.transitions.push_back(name);
      fused.push_back({h, f});
    }

  const std::uint32_t nt = r.num_transitions();
  r.w_minus.assign(r.num_places(), std::vector<std::uint32_t>(nt, 0));
  r.w_plus.assign(r.num_places(), std::vector<std::uint32_t>(nt, 0));
  for (std::uint32_t qi = 0; qi < keep_places.size(); ++qi) {
    const std::uint32_t q = keep_places[qi];
    for (std::uint32_t ti = 0; ti < keep_trans.size(); ++ti) {
      r.w_minus[qi][ti] = net.w_minus[q][keep_trans[ti]];
      r.w_plus[qi][ti] = net.w_plus[q][keep_trans[ti]];
    }
    for (std::uint32_t fi = 0; fi < fused.size(); ++fi) {
      const auto [h, f] = fused[fi];
      const std::uint32_t ti = static_cast<std::uint32_t>(keep_trans.size()) + fi;
      r.w_minus[qi][ti] = net.w_minus[q][h] + net.w_minus[q][f];
      r.w_plus[qi][ti] = net.w_plus[q][h] + net.w_plus[q][f];
    }
  }
  return r;
}

std::pair<PetriNet, ReductionStats> reduce_fixpoint(const PetriNet& net0,
                                                    const PropertyBinding& binding) {
  PetriNet net = net0;
  ReductionStats stats;
  for (;;) {
    auto [support, invisibles] = support_and_invisibles(net, binding);
    auto cands = find_agglomerations(net, support, invisibles);
    const AggloCandidate* pick = nullptr;
    for (AggloKind k : {AggloKind::Post, AggloKind::Pre}) {
      for (const AggloCandidate& c : cands)
        if (c.kind == k && (!pick || c.place < pick->place)) pick = &c;
      if (pick) break;
    }
    if (!pick) break;
    const auto fs = net.feeders(pick->place);
    const auto cs = net.consumers(pick->place);
    net = agglomerate(net, pick->place, pick->kind, support, invisibles);
    stats.places_removed += 1;
    stats.transitions_removed += static_cast<std::int64_t>(fs.size() + cs.size()) -
                                 static_cast<std::int64_t>(fs.size() * cs.size());
    stats.agglomerations += 1;
  }
  return {net, stats};
}

}  // namespace stutterkit
