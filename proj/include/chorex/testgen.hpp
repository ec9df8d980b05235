// Random test material: projectable choreographies, inefficient rewrites,
// fuzzed and unrolled networks.
#pragma once

#include <cstdint>

#include "chorex/core.hpp"

namespace chorex {

struct GenParams {
    int size = 10;       // total actions, conditionals included
    int processes = 2;
    int ifs = 0;
    int defs = 0;
    std::uint64_t seed = 0;
};

// Random well-formed choreography. Interactions and conditionals are spread
// uniformly over main and the procedures; names are p1..pN, X1..Xk, e1.., L1...
// Call targets are drawn along a random spanning tree from main, so every
// procedure is reachable; candidates failing the checks are regenerated.
Choreography generate(const GenParams& p);

// Insert selections at the head of conditional branches until projection
// succeeds. Projectable input comes back unchanged.
Choreography amend(const Choreography& c);

// Push interactions into following conditionals and swap nested conditionals
// at random sites.
Choreography inject_inefficiency(const Choreography& c, std::uint64_t seed);

struct FuzzParams {
    int deletions = 0;
    int swaps = 0;
    std::uint64_t seed = 0;
};

// Delete and swap actions in one randomly chosen process.
Network fuzz(const Network& n, const FuzzParams& p);

// Inline a few procedure calls of one process and shift the closing point of
// one of its loops.
Network unroll(const Network& n, std::uint64_t seed);

// Interactions plus conditionals, counted over main and all procedures.
int action_count(const Choreography& c);
int conditional_count(const Choreography& c);

}  // namespace chorex
