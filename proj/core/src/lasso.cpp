#include "stutterkit/lasso.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

#include "stutterkit/tgba.hpp"

namespace stutterkit {

namespace {

// Smallest p with p | n and v[i] == v[i mod p] for all i.
std::size_t primitive_period(const std::vector<Valuation>& v) {
  std::size_t n = v.size();
  for (std::size_t p = 1; p <= n / 2; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = v[i] == v[i - p];
    if (ok) return p;
  }
  return n;
}

}  // namespace

LassoWord normalize(const LassoWord& w) {
  if (w.loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  LassoWord r = w;
  r.loop.resize(primitive_period(r.loop));
  // Pull the loop left over the stem: the word is unchanged when the stem's
  // last symbol equals the loop's last symbol and the loop rotates right.
  while (!r.stem.empty() && r.stem.back() == r.loop.back()) {
    r.stem.pop_back();
    std::rotate(r.loop.begin(), r.loop.end() - 1, r.loop.end());
  }
  return r;
}

bool is_normalized(const LassoWord& w) {
  if (w.loop.empty()) return false;
  if (primitive_period(w.loop) != w.loop.size()) return false;
  return w.stem.empty() || w.stem.back() != w.loop.back();
}

static std::vector<Block> run_length(const std::vector<Valuation>& v,
                                     std::size_t begin, std::size_t end,
                                     const std::function<Valuation(std::size_t)>& at) {
  std::vector<Block> out;
  for (std::size_t i = begin; i < end; ++i) {
    Valuation s = at(i);
    if (!out.empty() && out.back().symbol == s)
      ++out.back().exponent;
    else
      out.push_back({s, 1});
  }
  (void)v;
  return out;
}

BlockForm block_form(const LassoWord& w) {
  assert(is_normalized(w));
  const std::size_t S = w.stem.size(), L = w.loop.size();
  auto at = [&](std::size_t i) -> Valuation {
    return i < S ? w.stem[i] : w.loop[(i - S) % L];
  };
  BlockForm bf;
  if (L == 1) {
    bf.stem_blocks = run_length(w.stem, 0, S, at);
    bf.omega = w.loop[0];
    return bf;
  }
  // First block boundary at or after the stem (position q with a distinct
  // predecessor); it exists within one loop length because the loop is not
  // uniform.  Everything before q is transient, the next L symbols tile the
  // periodic zone in whole blocks with a distinct wrap-around.
  std::size_t q = std::max<std::size_t>(S, 1);
  while (at(q - 1) == at(q)) ++q;
  bf.stem_blocks = run_length(w.stem, 0, q, at);
  bf.loop_blocks = run_length(w.loop, q, q + L, at);
  return bf;
}

namespace {

// Infinite block sequence access: transient then cycle.
struct BlockSeq {
  const std::vector<Block>& t;
  const std::vector<Block>& c;
  const Block& operator[](std::size_t i) const {
    return i < t.size() ? t[i] : c[(i - t.size()) % c.size()];
  }
};

}  // namespace

bool shorter_than(const LassoWord& w1, const LassoWord& w2) {
  assert(w1.ap == w2.ap);
  BlockForm b1 = block_form(w1), b2 = block_form(w2);
  if (b1.omega.has_value() != b2.omega.has_value()) return false;
  if (b1.omega) {
    // ω-tailed words: identical symbol skeleton including the tail symbol,
    // dominated exponents on the finite prefix.
    if (*b1.omega != *b2.omega) return false;
    if (b1.stem_blocks.size() != b2.stem_blocks.size()) return false;
    for (std::size_t i = 0; i < b1.stem_blocks.size(); ++i) {
      if (b1.stem_blocks[i].symbol != b2.stem_blocks[i].symbol) return false;
      if (b1.stem_blocks[i].exponent > b2.stem_blocks[i].exponent) return false;
    }
    return true;
  }
  // Plain case: both block sequences are eventually periodic.  Beyond the
  // longer transient both are periodic with period lcm(|c1|,|c2|), so one
  // aligned lcm window decides the infinite pointwise comparison.
  BlockSeq s1{b1.stem_blocks, b1.loop_blocks};
  BlockSeq s2{b2.stem_blocks, b2.loop_blocks};
  std::size_t t = std::max(b1.stem_blocks.size(), b2.stem_blocks.size());
  std::size_t window = t + std::lcm(b1.loop_blocks.size(), b2.loop_blocks.size());
  for (std::size_t i = 0; i < window; ++i) {
    if (s1[i].symbol != s2[i].symbol) return false;
    if (s1[i].exponent > s2[i].exponent) return false;
  }
  return true;
}

LassoWord canonical_shortest(const LassoWord& w) {
  BlockForm bf = block_form(w);
  LassoWord c;
  c.ap = w.ap;
  for (const Block& b : bf.stem_blocks) c.stem.push_back(b.symbol);
  if (bf.omega) {
    c.loop.push_back(*bf.omega);
  } else {
    for (const Block& b : bf.loop_blocks) c.loop.push_back(b.symbol);
  }
  return normalize(c);
}

bool stutter_equivalent(const LassoWord& w1, const LassoWord& w2) {
  assert(w1.ap == w2.ap);
  return canonical_shortest(w1) == canonical_shortest(w2);
}

// ---------------------------------------------------------------------------
// Enumeration

void enumerate_normalized_lassos(std::uint32_t num_ap, std::uint32_t stem_max,
                                 std::uint32_t loop_max,
                                 const std::function<void(const LassoWord&)>& fn,
                                 const std::vector<std::string>* ap) {
  std::vector<std::string> names;
  if (ap) {
    names = *ap;
  } else {
    for (std::uint32_t i = 0; i < num_ap; ++i) names.push_back("p" + std::to_string(i));
  }
  const Valuation sigma = Valuation(1) << num_ap;
  LassoWord w;
  w.ap = names;

  std::function<void(std::uint32_t)> gen_stem = [&](std::uint32_t stem_len) {
    if (w.stem.size() == stem_len) {
      if (!w.stem.empty() && w.stem.back() == w.loop.back()) return;
      fn(w);
      return;
    }
    for (Valuation v = 0; v < sigma; ++v) {
      w.stem.push_back(v);
      gen_stem(stem_len);
      w.stem.pop_back();
    }
  };
  std::function<void(std::uint32_t)> gen_loop = [&](std::uint32_t loop_len) {
    if (w.loop.size() == loop_len) {
      if (primitive_period(w.loop) != w.loop.size()) return;
      for (std::uint32_t s = 0; s <= stem_max; ++s) gen_stem(s);
      return;
    }
    for (Valuation v = 0; v < sigma; ++v) {
      w.loop.push_back(v);
      gen_loop(loop_len);
      w.loop.pop_back();
    }
  };
  for (std::uint32_t l = 1; l <= loop_max; ++l) gen_loop(l);
}

// ---------------------------------------------------------------------------
// Oracle

SensitivityReport bounded_sensitivity_oracle(const Tgba& a, std::uint32_t stem_max,
                                             std::uint32_t loop_max,
                                             std::size_t max_recorded) {
  SensitivityReport rep;
  rep.stem_max = stem_max;
  rep.loop_max = loop_max;

  // Only stutter-equivalent words are comparable, and those share a canonical
  // shortest form: bucket by it and compare within buckets only.  The
  // enumeration space is large (millions of lassos at 3 atoms, stem 4,
  // loop 3), so entries are packed into short strings — one byte per
  // valuation (fine while kMaxAp <= 8), both lengths prefixed — instead of
  // carrying a LassoWord each, and the buckets come from a single sort.
  auto pack = [](const LassoWord& w) {
    std::string s;
    s.reserve(2 + w.stem.size() + w.loop.size());
    s.push_back(static_cast<char>(w.stem.size()));
    s.push_back(static_cast<char>(w.loop.size()));
    for (Valuation v : w.stem) s.push_back(static_cast<char>(v));
    for (Valuation v : w.loop) s.push_back(static_cast<char>(v));
    return s;
  };
  auto unpack = [&](const std::string& s) {
    LassoWord w;
    w.ap = a.ap;
    std::size_t sl = static_cast<unsigned char>(s[0]);
    std::size_t ll = static_cast<unsigned char>(s[1]);
    for (std::size_t i = 0; i < sl; ++i)
      w.stem.push_back(static_cast<unsigned char>(s[2 + i]));
    for (std::size_t i = 0; i < ll; ++i)
      w.loop.push_back(static_cast<unsigned char>(s[2 + sl + i]));
    return w;
  };

  struct Packed {
    std::string canon, word;
    bool member;
  };
  std::vector<Packed> all;
  LassoMembership cache(a);
  enumerate_normalized_lassos(
      static_cast<std::uint32_t>(a.ap.size()), stem_max, loop_max,
      [&](const LassoWord& w) {
        ++rep.lassos_enumerated;
        bool member = cache.accepts(w);
        if (member) ++rep.accepted;
        all.push_back({pack(canonical_shortest(w)), pack(w), member});
      },
      &a.ap);
  std::sort(all.begin(), all.end(),
            [](const Packed& x, const Packed& y) { return x.canon < y.canon; });

  std::vector<LassoWord> ws;
  std::size_t lo = 0;
  while (lo < all.size()) {
    std::size_t hi = lo;
    while (hi < all.size() && all[hi].canon == all[lo].canon) ++hi;
    if (hi - lo >= 2) {
      ws.clear();
      for (std::size_t i = lo; i < hi; ++i) ws.push_back(unpack(all[i].word));
      for (std::size_t i = 0; i < ws.size(); ++i) {
        for (std::size_t j = 0; j < ws.size(); ++j) {
          if (i == j) continue;
          bool short_member = all[lo + i].member, long_member = all[lo + j].member;
          if (!short_member && !long_member) continue;
          if (!shorter_than(ws[i], ws[j])) continue;
          if (long_member && !short_member) {
            ++rep.shortening_count;
            if (rep.shortening_violations.size() < max_recorded)
              rep.shortening_violations.push_back({ws[i], ws[j]});
          }
          if (short_member && !long_member) {
            ++rep.lengthening_count;
            if (rep.lengthening_violations.size() < max_recorded)
              rep.lengthening_violations.push_back({ws[i], ws[j]});
          }
        }
      }
    }
    lo = hi;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Literal syntax

LassoWord parse_lasso_literal(const std::string& text,
                              const std::vector<std::string>& ap) {
  LassoWord w;
  w.ap = ap;
  std::vector<Valuation>* side = &w.stem;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    if (text[i] == ';') {
      if (side == &w.loop) throw parse_error("second ';' in lasso literal", i);
      side = &w.loop;
      ++i;
      continue;
    }
    if (text[i] != '{') throw parse_error("expected '{'", i);
    ++i;
    Valuation v = 0;
    while (true) {
      skip_ws();
      if (i >= text.size()) throw parse_error("unterminated valuation", i);
      if (text[i] == '}') {
        ++i;
        break;
      }
      if (text[i] == ',') {
        ++i;
        continue;
      }
      std::size_t b = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        ++i;
      if (i == b) throw parse_error("expected atom name", i);
      std::string name = text.substr(b, i - b);
      auto it = std::find(ap.begin(), ap.end(), name);
      if (it == ap.end()) throw parse_error("unknown atom '" + name + "'", b);
      v |= Valuation(1) << (it - ap.begin());
    }
    side->push_back(v);
  }
  if (w.loop.empty()) throw parse_error("lasso literal needs a nonempty loop", text.size());
  return w;
}

static std::string format_valuation(Valuation v, const std::vector<std::string>& ap) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < ap.size(); ++i) {
    if (v & (Valuation(1) << i)) {
      if (!first) out += ",";
      out += ap[i];
      first = false;
    }
  }
  out += "}";
  return out;
}

std::string format_lasso_literal(const LassoWord& w) {
  std::string out;
  for (Valuation v : w.stem) out += format_valuation(v, w.ap);
  out += ";";
  for (Valuation v : w.loop) out += format_valuation(v, w.ap);
  return out;
}

}  // namespace stutterkit
