#pragma once

#include <string>

#include "stutterkit/tgba.hpp"

namespace stutterkit {

// HOA v1 serialization (transition-based generalized Büchi only); a nonempty
// `name` is emitted as the automaton's name header.
std::string to_hoa(const Tgba& a, const std::string& name = "");

// HOA v1 parser for the TGBA fragment: single start state, explicit edge
// labels, acceptance of the form `t` or a conjunction Inf(0)&...&Inf(k-1),
// acceptance marks on edges only.  Everything else is rejected with a
// parse_error carrying a byte offset.
Tgba parse_hoa(const std::string& text);

}  // namespace stutterkit
