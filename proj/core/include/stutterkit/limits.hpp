#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace stutterkit {

// Raised when a construction outgrows its configured caps (states, ranks,
// wall clock).  Callers that can degrade gracefully (partitioning, the
// check procedures) catch this and report a resource failure instead of an
// answer.
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised on malformed input text; `offset` is a byte offset into the input.
struct parse_error : std::runtime_error {
  std::size_t offset;
  parse_error(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset(offset) {}
};

using clock = std::chrono::steady_clock;

// Resource budget threaded through every potentially-explosive operation.
struct ExecLimits {
  std::uint64_t state_cap = 1'000'000;       // per constructed automaton / state space
  std::uint64_t complement_cap = 1'000'000;  // states of one complement construction
  int rank_bound = -1;                       // <0: default 2n for an n-state input
  std::optional<clock::time_point> deadline; // cooperative wall-clock cutoff

  void check_deadline(const char* where) const {
    if (deadline && clock::now() > *deadline)
      throw resource_error(std::string("timeout in ") + where);
  }
  void check_states(std::uint64_t n, const char* where) const {
    if (n > state_cap)
      throw resource_error(std::string("state cap exceeded in ") + where + ": " +
                           std::to_string(n) + " > " + std::to_string(state_cap));
  }

  static ExecLimits with_timeout(double seconds) {
    ExecLimits lim;
    lim.deadline = clock::now() +
        std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(seconds));
    return lim;
  }
};

}  // namespace stutterkit
