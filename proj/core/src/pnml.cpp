#include <cctype>
#include <map>
#include <vector>

#include "stutterkit/petri.hpp"

namespace stutterkit {

namespace {

// Just enough XML for the PNML place/transition subset: tags with attributes,
// text content, comments, and a prolog.  Namespaces and DTDs are not handled.
struct XmlScanner {
  const std::string& s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what, std::size_t at) {
    throw parse_error("PNML: " + what, at);
  }
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool starts_with(const char* t) const {
    return s.compare(pos, std::char_traits<char>::length(t), t) == 0;
  }

  static std::string decode(const std::string& raw, std::size_t off) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out += raw[i];
        continue;
      }
      std::size_t semi = raw.find(';', i);
      if (semi == std::string::npos)
        throw parse_error("PNML: unterminated entity", off + i);
      std::string name = raw.substr(i + 1, semi - i - 1);
      if (name == "amp") out += '&';
      else if (name == "lt") out += '<';
      else if (name == "gt") out += '>';
      else if (name == "quot") out += '"';
      else if (name == "apos") out += '\'';
      else throw parse_error("PNML: unknown entity '&" + name + ";'", off + i);
      i = semi;
    }
    return out;
  }

  struct Tag {
    std::string name;
    std::map<std::string, std::string> attrs;
    bool closing = false;      // </name>
    bool self_closing = false; // <name/>
    std::size_t offset = 0;
  };

  // Text up to the next tag (entity-decoded), then the tag itself; tag.name
  // empty at end of input.
  std::pair<std::string, Tag> next(bool want_text) {
    std::string text;
    for (;;) {
      std::size_t lt = s.find('<', pos);
      if (lt == std::string::npos) {
        pos = s.size();
        return {text, Tag{}};
      }
      if (want_text) text += decode(s.substr(pos, lt - pos), pos);
      pos = lt;
      if (starts_with("<!--")) {
        std::size_t end = s.find("-->", pos);
        if (end == std::string::npos) fail("unterminated comment", pos);
        pos = end + 3;
        continue;
      }
      if (starts_with("<?")) {
        std::size_t end = s.find("?>", pos);
        if (end == std::string::npos) fail("unterminated processing instruction", pos);
        pos = end + 2;
        continue;
      }
      if (starts_with("<!")) {
        std::size_t end = s.find('>', pos);
        if (end == std::string::npos) fail("unterminated declaration", pos);
        pos = end + 1;
        continue;
      }
      return {text, tag()};
    }
  }

  Tag tag() {
    Tag t;
    t.offset = pos;
    ++pos;  // '<'
    if (pos < s.size() && s[pos] == '/') {
      t.closing = true;
      ++pos;
    }
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                              s[pos] == '_' || s[pos] == '-' || s[pos] == ':'))
      ++pos;
    if (pos == start) fail("expected element name", pos);
    t.name = s.substr(start, pos - start);
    for (;;) {
      skip_ws();
      if (pos >= s.size()) fail("unterminated tag", t.offset);
      if (s[pos] == '>') {
        ++pos;
        return t;
      }
      if (s[pos] == '/') {
        if (pos + 1 >= s.size() || s[pos + 1] != '>') fail("malformed tag end", pos);
        t.self_closing = true;
        pos += 2;
        return t;
      }
      std::size_t astart = pos;
      while (pos < s.size() && s[pos] != '=' &&
             !std::isspace(static_cast<unsigned char>(s[pos])))
        ++pos;
      std::string aname = s.substr(astart, pos - astart);
      skip_ws();
      if (pos >= s.size() || s[pos] != '=') fail("expected '=' in attribute", astart);
      ++pos;
      skip_ws();
      if (pos >= s.size() || (s[pos] != '"' && s[pos] != '\''))
        fail("expected quoted attribute value", pos);
      char q = s[pos++];
      std::size_t vstart = pos;
      std::size_t vend = s.find(q, pos);
      if (vend == std::string::npos) fail("unterminated attribute value", vstart);
      t.attrs[aname] = decode(s.substr(vstart, vend - vstart), vstart);
      pos = vend + 1;
    }
  }

  // Skip everything up to and including the matching close of `name`
  // (used for graphics/toolspecific subtrees).
  void skip_subtree(const std::string& name) {
    int depth = 1;
    while (depth > 0) {
      auto [text, t] = next(false);
      if (t.name.empty()) fail("unterminated <" + name + "> subtree", pos);
      if (t.closing) --depth;
      else if (!t.self_closing) ++depth;
    }
  }
};

std::int64_t parse_int_text(const std::string& raw, std::size_t off) {
  std::string t;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  std::size_t digits = t.size() - (t.empty() || t[0] != '-' ? 0 : 1);
  if (digits == 0 || digits > 9)
    throw parse_error("PNML: expected integer, got '" + t + "'", off);
  for (std::size_t i = t.size() - digits; i < t.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t[i])))
      throw parse_error("PNML: expected integer, got '" + t + "'", off);
  return std::stol(t);
}

}  // namespace

PetriNet parse_pnml(const std::string& text) {
  XmlScanner x{text};

  PetriNet net;
  std::map<std::string, std::uint32_t> place_ix, trans_ix;
  struct Arc {
    std::string source, target;
    std::uint32_t weight = 1;
    std::size_t offset = 0;
  };
  std::vector<Arc> arcs;

  // Element stack with just the state this subset needs.
  std::vector<std::string> stack;
  std::string cur_place, cur_trans;  // ids, while inside the element
  Arc cur_arc;
  bool in_arc = false;
  enum class TextSlot { None, InitialMarking, Inscription, Name } slot = TextSlot::None;

  auto top_is = [&](const char* n) { return !stack.empty() && stack.back() == n; };

  for (;;) {
    auto [content, t] = x.next(slot != TextSlot::None && top_is("text"));
    if (!content.empty() && top_is("text")) {
      if (slot == TextSlot::InitialMarking) {
        std::int64_t v = parse_int_text(content, t.offset);
        if (v < 0) throw parse_error("PNML: negative initial marking", t.offset);
        net.m0[place_ix.at(cur_place)] = static_cast<std::uint32_t>(v);
      } else if (slot == TextSlot::Inscription) {
        std::int64_t v = parse_int_text(content, t.offset);
        if (v < 0) throw parse_error("PNML: negative arc inscription", t.offset);
        cur_arc.weight = static_cast<std::uint32_t>(v);
      }
    }
    if (t.name.empty()) break;

    if (t.closing) {
      if (stack.empty() || stack.back() != t.name)
        x.fail("mismatched closing tag </" + t.name + ">", t.offset);
      stack.pop_back();
      if (t.name == "place") cur_place.clear();
      else if (t.name == "transition") cur_trans.clear();
      else if (t.name == "arc") {
        arcs.push_back(cur_arc);
        in_arc = false;
      } else if (t.name == "initialMarking" || t.name == "inscription" || t.name == "name")
        slot = TextSlot::None;
      continue;
    }

    const std::string& n = t.name;
    if (n == "graphics" || n == "toolspecific") {
      if (!t.self_closing) x.skip_subtree(n);
      continue;
    }
    if (n == "pnml" || n == "net" || n == "page") {
      if (!t.self_closing) stack.push_back(n);
      continue;
    }
    if (n == "place") {
      auto it = t.attrs.find("id");
      if (it == t.attrs.end()) x.fail("place without id", t.offset);
      if (place_ix.count(it->second) || trans_ix.count(it->second))
        x.fail("duplicate id '" + it->second + "'", t.offset);
      place_ix[it->second] = net.num_places();
      net.places.push_back(it->second);
      net.m0.push_back(0);
      if (!t.self_closing) {
        stack.push_back(n);
        cur_place = it->second;
      }
      continue;
    }
    if (n == "transition") {
      auto it = t.attrs.find("id");
      if (it == t.attrs.end()) x.fail("transition without id", t.offset);
      if (place_ix.count(it->second) || trans_ix.count(it->second))
        x.fail("duplicate id '" + it->second + "'", t.offset);
      trans_ix[it->second] = static_cast<std::uint32_t>(net.transitions.size());
      net.transitions.push_back(it->second);
      if (!t.self_closing) {
        stack.push_back(n);
        cur_trans = it->second;
      }
      continue;
    }
    if (n == "arc") {
      if (!t.attrs.count("source") || !t.attrs.count("target"))
        x.fail("arc without source/target", t.offset);
      cur_arc = Arc{t.attrs.at("source"), t.attrs.at("target"), 1, t.offset};
      if (t.self_closing) arcs.push_back(cur_arc);
      else {
        stack.push_back(n);
        in_arc = true;
      }
      continue;
    }
    if (n == "initialMarking") {
      if (!top_is("place")) x.fail("initialMarking outside place", t.offset);
      if (!t.self_closing) {
        stack.push_back(n);
        slot = TextSlot::InitialMarking;
      }
      continue;
    }
    if (n == "inscription") {
      if (!in_arc) x.fail("inscription outside arc", t.offset);
      if (!t.self_closing) {
        stack.push_back(n);
        slot = TextSlot::Inscription;
      }
      continue;
    }
    if (n == "name") {
      if (!t.self_closing) {
        stack.push_back(n);
        slot = TextSlot::Name;
      }
      continue;
    }
    if (n == "text") {
      if (slot == TextSlot::None) x.fail("unexpected <text>", t.offset);
      if (!t.self_closing) stack.push_back(n);
      continue;
    }
    x.fail("unsupported element <" + n + ">", t.offset);
  }
  if (!stack.empty()) x.fail("unclosed element <" + stack.back() + ">", text.size());

  net.w_minus.assign(net.num_places(),
                     std::vector<std::uint32_t>(net.num_transitions(), 0));
  net.w_plus.assign(net.num_places(),
                    std::vector<std::uint32_t>(net.num_transitions(), 0));
  for (const Arc& a : arcs) {
    auto ps = place_ix.find(a.source);
    auto pt = place_ix.find(a.target);
    auto ts = trans_ix.find(a.source);
    auto tt = trans_ix.find(a.target);
    if (ps != place_ix.end() && tt != trans_ix.end())
      net.w_minus[ps->second][tt->second] += a.weight;
    else if (ts != trans_ix.end() && pt != place_ix.end())
      net.w_plus[pt->second][ts->second] += a.weight;
    else if (ps != place_ix.end() && pt != place_ix.end())
      throw parse_error("PNML: arc between two places", a.offset);
    else if (ts != trans_ix.end() && tt != trans_ix.end())
      throw parse_error("PNML: arc between two transitions", a.offset);
    else
      throw parse_error("PNML: arc references unknown id '" +
                            (ps == place_ix.end() && ts == trans_ix.end() ? a.source
                                                                          : a.target) +
                            "'",
                        a.offset);
  }
  return net;
}

}  // namespace stutterkit
