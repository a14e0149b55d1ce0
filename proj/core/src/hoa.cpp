#include "stutterkit/hoa.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

#include "stutterkit/limits.hpp"

namespace stutterkit {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string label_of(Guard g, const Tgba& a) {
  if (g == a.full_guard()) return "t";
  std::string out;
  for (std::uint32_t v = 0; v < a.num_letters(); ++v) {
    if (!(g & (Guard(1) << v))) continue;
    if (!out.empty()) out += " | ";
    if (a.ap.empty()) return "t";  // single letter, full guard handled above
    std::string term;
    for (std::size_t i = 0; i < a.ap.size(); ++i) {
      if (!term.empty()) term += "&";
      if (!(v & (1u << i))) term += "!";
      term += std::to_string(i);
    }
    out += term;
  }
  return out.empty() ? "f" : out;
}

}  // namespace

std::string to_hoa(const Tgba& a, const std::string& name) {
  std::ostringstream os;
  os << "HOA: v1\n";
  if (!name.empty()) os << "name: " << quote(name) << "\n";
  os << "States: " << a.num_states << "\n";
  os << "Start: " << a.initial << "\n";
  os << "AP: " << a.ap.size();
  for (const auto& name : a.ap) os << " " << quote(name);
  os << "\n";
  if (a.acceptance_count == 0) {
    os << "acc-name: all\n";
    os << "Acceptance: 0 t\n";
  } else {
    os << "acc-name: generalized-Buchi " << a.acceptance_count << "\n";
    os << "Acceptance: " << a.acceptance_count << " ";
    for (std::uint32_t i = 0; i < a.acceptance_count; ++i) {
      if (i) os << "&";
      os << "Inf(" << i << ")";
    }
    os << "\n";
  }
  os << "properties: trans-labels explicit-labels trans-acc\n";
  os << "--BODY--\n";
  auto out = a.out_index();
  for (std::uint32_t s = 0; s < a.num_states; ++s) {
    os << "State: " << s << "\n";
    for (std::uint32_t ei : out[s]) {
      const TgbaEdge& e = a.edges[ei];
      os << "[" << label_of(e.guard, a) << "] " << e.dst;
      if (e.marks) {
        os << " {";
        bool first = true;
        for (std::uint32_t m = 0; m < a.acceptance_count; ++m)
          if (e.marks & (MarkSet(1) << m)) {
            if (!first) os << " ";
            os << m;
            first = false;
          }
        os << "}";
      }
      os << "\n";
    }
  }
  os << "--END--\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok {
  End,
  HeaderName,  // word ending in ':'
  Word,        // identifier or v1
  Int,
  String,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Amp,
  Bar,
  Bang,
  Body,  // --BODY--
  Fin,   // --END--
};

struct Lexer {
  const std::string& s;
  std::size_t i = 0;
  Tok kind = Tok::End;
  std::string text;
  std::uint64_t value = 0;
  std::size_t tok_off = 0;

  explicit Lexer(const std::string& src) : s(src) { next(); }

  [[noreturn]] void fail(const std::string& what, std::size_t off) const {
    throw parse_error(what, off);
  }

  void skip_ws() {
    while (i < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[i]))) {
        ++i;
      } else if (s[i] == '/' && i + 1 < s.size() && s[i + 1] == '*') {
        std::size_t start = i;
        i += 2;
        int depth = 1;
        while (i < s.size() && depth) {
          if (s[i] == '/' && i + 1 < s.size() && s[i + 1] == '*') {
            ++depth;
            i += 2;
          } else if (s[i] == '*' && i + 1 < s.size() && s[i + 1] == '/') {
            --depth;
            i += 2;
          } else {
            ++i;
          }
        }
        if (depth) fail("unterminated comment", start);
      } else {
        break;
      }
    }
  }

  void next() {
    skip_ws();
    tok_off = i;
    if (i >= s.size()) {
      kind = Tok::End;
      return;
    }
    char c = s[i];
    if (c == '-' && s.compare(i, 8, "--BODY--") == 0) {
      kind = Tok::Body;
      i += 8;
      return;
    }
    if (c == '-' && s.compare(i, 7, "--END--") == 0) {
      kind = Tok::Fin;
      i += 7;
      return;
    }
    switch (c) {
      case '[': kind = Tok::LBracket; ++i; return;
      case ']': kind = Tok::RBracket; ++i; return;
      case '{': kind = Tok::LBrace; ++i; return;
      case '}': kind = Tok::RBrace; ++i; return;
      case '(': kind = Tok::LParen; ++i; return;
      case ')': kind = Tok::RParen; ++i; return;
      case '&': kind = Tok::Amp; ++i; return;
      case '|': kind = Tok::Bar; ++i; return;
      case '!': kind = Tok::Bang; ++i; return;
      default: break;
    }
    if (c == '"') {
      ++i;
      text.clear();
      while (i < s.size() && s[i] != '"') {
        if (s[i] == '\\' && i + 1 < s.size()) ++i;
        text += s[i++];
      }
      if (i >= s.size()) fail("unterminated string", tok_off);
      ++i;
      kind = Tok::String;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      value = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        value = value * 10 + (s[i] - '0');
        if (value > 1'000'000'000ull) fail("number too large", tok_off);
        ++i;
      }
      kind = Tok::Int;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      text.clear();
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' ||
              s[i] == '-' || s[i] == '.')) {
        text += s[i++];
      }
      if (i < s.size() && s[i] == ':') {
        ++i;
        kind = Tok::HeaderName;
        return;
      }
      kind = Tok::Word;
      return;
    }
    fail(std::string("unexpected character '") + c + "'", i);
  }
};

// Label expression over AP indices, evaluated directly to a letter set.
Guard parse_label(Lexer& lx, const Tgba& a);

Guard parse_label_atom(Lexer& lx, const Tgba& a) {
  if (lx.kind == Tok::Bang) {
    lx.next();
    return a.full_guard() & ~parse_label_atom(lx, a);
  }
  if (lx.kind == Tok::LParen) {
    lx.next();
    Guard g = parse_label(lx, a);
    if (lx.kind != Tok::RParen) lx.fail("expected ')'", lx.tok_off);
    lx.next();
    return g;
  }
  if (lx.kind == Tok::Word && lx.text == "t") {
    lx.next();
    return a.full_guard();
  }
  if (lx.kind == Tok::Word && lx.text == "f") {
    lx.next();
    return 0;
  }
  if (lx.kind == Tok::Int) {
    if (lx.value >= a.ap.size())
      lx.fail("atomic proposition index out of range", lx.tok_off);
    std::uint32_t bit = static_cast<std::uint32_t>(lx.value);
    lx.next();
    Guard g = 0;
    for (std::uint32_t v = 0; v < a.num_letters(); ++v)
      if (v & (1u << bit)) g |= Guard(1) << v;
    return g;
  }
  lx.fail("expected label expression", lx.tok_off);
}

Guard parse_label_and(Lexer& lx, const Tgba& a) {
  Guard g = parse_label_atom(lx, a);
  while (lx.kind == Tok::Amp) {
    lx.next();
    g &= parse_label_atom(lx, a);
  }
  return g;
}

Guard parse_label(Lexer& lx, const Tgba& a) {
  Guard g = parse_label_and(lx, a);
  while (lx.kind == Tok::Bar) {
    lx.next();
    g |= parse_label_and(lx, a);
  }
  return g;
}

}  // namespace

Tgba parse_hoa(const std::string& text) {
  Lexer lx(text);
  if (lx.kind != Tok::HeaderName || lx.text != "HOA")
    lx.fail("expected 'HOA: v1'", lx.tok_off);
  lx.next();
  if (lx.kind != Tok::Word || lx.text != "v1") lx.fail("only HOA v1 is supported", lx.tok_off);
  lx.next();

  Tgba a;
  std::optional<std::uint32_t> num_states, start, num_ap, num_acc;
  bool acc_all = false;

  while (lx.kind != Tok::Body) {
    if (lx.kind == Tok::End) lx.fail("missing --BODY--", lx.tok_off);
    if (lx.kind != Tok::HeaderName)
      lx.fail("expected a header item", lx.tok_off);
    std::string name = lx.text;
    std::size_t name_off = lx.tok_off;
    lx.next();
    if (name == "States") {
      if (lx.kind != Tok::Int) lx.fail("expected state count", lx.tok_off);
      num_states = static_cast<std::uint32_t>(lx.value);
      lx.next();
    } else if (name == "Start") {
      if (start) lx.fail("multiple initial states are not supported", name_off);
      if (lx.kind != Tok::Int) lx.fail("expected initial state index", lx.tok_off);
      start = static_cast<std::uint32_t>(lx.value);
      lx.next();
      if (lx.kind == Tok::Amp || lx.kind == Tok::Int)
        lx.fail("multiple initial states are not supported", lx.tok_off);
    } else if (name == "AP") {
      if (lx.kind != Tok::Int) lx.fail("expected atomic proposition count", lx.tok_off);
      num_ap = static_cast<std::uint32_t>(lx.value);
      if (*num_ap > kMaxAp)
        lx.fail("more than " + std::to_string(kMaxAp) + " atomic propositions", lx.tok_off);
      lx.next();
      for (std::uint32_t i = 0; i < *num_ap; ++i) {
        if (lx.kind != Tok::String) lx.fail("expected quoted atomic proposition", lx.tok_off);
        a.ap.push_back(lx.text);
        lx.next();
      }
    } else if (name == "Acceptance") {
      if (lx.kind != Tok::Int) lx.fail("expected acceptance set count", lx.tok_off);
      num_acc = static_cast<std::uint32_t>(lx.value);
      if (*num_acc > kMaxMarks) lx.fail("too many acceptance sets", lx.tok_off);
      lx.next();
      if (lx.kind == Tok::Word && lx.text == "t") {
        acc_all = true;
        lx.next();
        if (*num_acc != 0)
          lx.fail("acceptance 't' requires 0 sets", lx.tok_off);
      } else {
        MarkSet seen = 0;
        while (true) {
          if (lx.kind != Tok::Word || lx.text != "Inf")
            lx.fail("only generalized-Buchi acceptance (Inf conjunction) is supported",
                    lx.tok_off);
          lx.next();
          if (lx.kind != Tok::LParen) lx.fail("expected '('", lx.tok_off);
          lx.next();
          if (lx.kind != Tok::Int || lx.value >= *num_acc)
            lx.fail("expected acceptance set index", lx.tok_off);
          seen |= MarkSet(1) << lx.value;
          lx.next();
          if (lx.kind != Tok::RParen) lx.fail("expected ')'", lx.tok_off);
          lx.next();
          if (lx.kind != Tok::Amp) break;
          lx.next();
        }
        MarkSet want = *num_acc >= 32 ? ~MarkSet(0) : (MarkSet(1) << *num_acc) - 1;
        if (seen != want)
          lx.fail("acceptance must be Inf(0)&...&Inf(k-1)", name_off);
        acc_all = *num_acc == 0;
      }
    } else {
      // acc-name, tool, name, properties, ...: skip to the next header item.
      while (lx.kind == Tok::Word || lx.kind == Tok::Int || lx.kind == Tok::String)
        lx.next();
    }
  }
  lx.next();  // --BODY--
  (void)acc_all;

  if (!num_acc) lx.fail("missing Acceptance header", lx.tok_off);
  a.acceptance_count = *num_acc;

  std::vector<TgbaEdge> edges;
  std::optional<std::uint32_t> cur_state;
  std::uint32_t max_state = 0;
  while (lx.kind != Tok::Fin) {
    if (lx.kind == Tok::End) lx.fail("missing --END--", lx.tok_off);
    if (lx.kind == Tok::HeaderName && lx.text == "State") {
      lx.next();
      if (lx.kind == Tok::LBracket)
        lx.fail("state labels are not supported (transition-based only)", lx.tok_off);
      if (lx.kind != Tok::Int) lx.fail("expected state index", lx.tok_off);
      cur_state = static_cast<std::uint32_t>(lx.value);
      max_state = std::max(max_state, *cur_state);
      lx.next();
      if (lx.kind == Tok::String) lx.next();  // optional state name
      if (lx.kind == Tok::LBrace)
        lx.fail("state-based acceptance marks are not supported", lx.tok_off);
      continue;
    }
    if (lx.kind == Tok::LBracket) {
      if (!cur_state) lx.fail("edge before any 'State:' item", lx.tok_off);
      lx.next();
      Guard g = parse_label(lx, a);
      if (lx.kind != Tok::RBracket) lx.fail("expected ']'", lx.tok_off);
      lx.next();
      if (lx.kind != Tok::Int) lx.fail("expected destination state", lx.tok_off);
      std::uint32_t dst = static_cast<std::uint32_t>(lx.value);
      max_state = std::max(max_state, dst);
      lx.next();
      if (lx.kind == Tok::Amp || (lx.kind == Tok::Int))
        lx.fail("multiple edge destinations are not supported", lx.tok_off);
      MarkSet marks = 0;
      if (lx.kind == Tok::LBrace) {
        lx.next();
        while (lx.kind == Tok::Int) {
          if (lx.value >= a.acceptance_count)
            lx.fail("acceptance mark out of range", lx.tok_off);
          marks |= MarkSet(1) << lx.value;
          lx.next();
        }
        if (lx.kind != Tok::RBrace) lx.fail("expected '}'", lx.tok_off);
        lx.next();
      }
      if (g)  // contradictory labels yield no edge
        edges.push_back({*cur_state, dst, g, marks});
      continue;
    }
    if (lx.kind == Tok::Int)
      lx.fail("implicit edge labels are not supported", lx.tok_off);
    lx.fail("expected 'State:', an edge, or --END--", lx.tok_off);
  }
  lx.next();
  if (lx.kind != Tok::End) lx.fail("trailing input after --END--", lx.tok_off);

  std::uint32_t n = num_states ? *num_states
                               : (cur_state ? max_state + 1 : 0);
  if (cur_state && n <= max_state)
    throw parse_error("state index exceeds declared state count", 0);
  if (n == 0) {
    // Empty automaton body: canonical empty automaton.
    Tgba e = empty_tgba(a.ap);
    e.acceptance_count = a.acceptance_count;
    return e;
  }
  a.num_states = n;
  a.initial = start.value_or(0);
  if (a.initial >= n) throw parse_error("initial state out of range", 0);
  a.edges = std::move(edges);
  std::stable_sort(a.edges.begin(), a.edges.end(),
                   [](const TgbaEdge& x, const TgbaEdge& y) { return x.src < y.src; });
  return a;
}

}  // namespace stutterkit
