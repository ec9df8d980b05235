// Similarity and bisimilarity of choreographies, by a budgeted pair worklist.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "chorex/core.hpp"

namespace chorex {

struct SimBudget {
    std::uint64_t max_pairs = 100000;
    std::uint64_t max_millis = 60000;
};

enum class Verdict { Yes, No, Exhausted };
std::string verdict_name(Verdict v);

struct SimWitness {
    ActionLabel action;   // offered by the simulated side, not matched
    std::string left;     // state of the simulated side
    std::string right;    // state of the simulating side
};

struct SimResult {
    Verdict verdict = Verdict::Exhausted;
    std::uint64_t pairs_explored = 0;
    std::optional<SimWitness> witness;
    std::string to_json() const;
};

// Every action of a is matched by b, pair by pair, starting from the mains.
SimResult can_simulate(const Program& a, const Program& b, const SimBudget& budget = {});
SimResult can_simulate(const Choreography& a, const Choreography& b, const SimBudget& budget = {});

// Simulation in both directions.
SimResult bisimilar(const Program& a, const Program& b, const SimBudget& budget = {});
SimResult bisimilar(const Choreography& a, const Choreography& b, const SimBudget& budget = {});

}  // namespace chorex
