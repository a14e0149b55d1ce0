#pragma once

#include <cstdint>
#include <random>

#include "stutterkit/ltl.hpp"
#include "stutterkit/petri.hpp"

namespace stutterkit {

// Seed for randomized corpora: the STUTTERKIT_SEED environment variable when
// set (decimal), else `fallback`.  Every property suite routes its seed
// through here so runs are reproducible.
std::uint64_t corpus_seed(std::uint64_t fallback);

// Random formula with temporal depth at most `depth` over the first
// `num_atoms` of p,q,r: each node draws uniformly over atom / true / ¬ / X /
// F / G / ∧ / ∨ / U / R.
Ltl random_formula(std::mt19937_64& rng, int depth = 3, int num_atoms = 3);

// Small random net (≤ 8 places, unit arc weights) with p,q,r bound to
// emptiness tests on three observed places.  Draws are biased toward an
// agglomerable chain through an initially empty hidden buffer so reduction
// suites find work, and rejected until the reachability graph fits a small
// cap, keeping downstream ground-truth products cheap.
struct RandomNet {
  PetriNet net;
  PropertyBinding binding;
};
RandomNet random_net(std::mt19937_64& rng);

}  // namespace stutterkit
