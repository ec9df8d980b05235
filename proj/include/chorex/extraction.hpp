// Choreography extraction: lazy construction of a valid symbolic execution
// graph (SEG), DAG-ification and read-off, split by communication-graph
// components.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chorex/core.hpp"
#include "chorex/semantics.hpp"

namespace chorex {

enum class Strategy {
    Random,
    LongestFirst,
    ShortestFirst,
    InteractionsFirst,
    ConditionalsFirst,
    UnmarkedFirst,
    UnmarkedThenInteractions,
    UnmarkedThenSelections,
    UnmarkedThenConditionals,
    UnmarkedThenRandom,
};

const std::vector<Strategy>& all_strategies();
std::string strategy_name(Strategy s);
std::string strategy_abbrev(Strategy s);
// Accepts full names and abbreviations (R, L, S, I, C, U, UI, US, UC, UR).
std::optional<Strategy> parse_strategy(std::string_view s);

using Rng = std::mt19937_64;
// Uniform in [0, n). Hand-rolled so results do not depend on the standard library.
std::uint64_t uniform(Rng& rng, std::uint64_t n);
template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform(rng, i)]);
}
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

// Permutation of steps. A Then step is always immediately followed by its Else.
std::vector<Step> order_steps(std::vector<Step> steps, Strategy s, const AnnotatedNetwork& an,
                              Rng& rng);

enum class Outcome { Ok, Fail, Badloop };

using ChoicePath = std::string;  // over '0' (then) and '1' (else)
bool is_prefix(std::string_view a, std::string_view b);

struct PathStackEntry {
    int node = -1;
    int white_below = 0;  // white nodes strictly below this entry
};

// The closed segment target..top contains a white node.
bool loop_is_valid(const PathStackEntry& target, const PathStackEntry& top, bool top_white);

struct SegEdge {
    ActionLabel label;
    int target = -1;
};

struct SegNode {
    enum class Leaf : std::uint8_t { None, Terminal, Deadlock };
    AnnotatedNetwork an;
    ChoicePath path;
    bool white = false;
    Leaf leaf = Leaf::None;
    std::vector<SegEdge> out;
};

struct Seg {
    std::vector<SegNode> nodes;
    int root = -1;
};

// Structural and validity check of a finished SEG, independent of the builder:
// out-degrees, edge labels replayed through the semantics, reachability, and
// acyclicity of the non-white subgraph. Empty string when valid.
std::string check_seg(const Seg& seg);

struct Dag {
    std::vector<int> loop_nodes;        // discovery order; loop_nodes[i] is X{i+1}
    std::vector<int> proc_of;           // node -> index into loop_nodes, or -1
};
Dag unroll_graph(const Seg& seg);
Choreography build_choreography(const Seg& seg, const Dag& dag);

// Undirected communication graph; returns the connected components as sorted
// lists of process names, ordered by their smallest name.
std::vector<std::vector<Name>> communication_components(const Network& n);

struct ExtractOptions {
    Strategy strategy = Strategy::InteractionsFirst;
    std::uint64_t seed = 0;
    std::set<Name> services;
    bool split_components = true;
    bool concurrent = true;
    // A deadlocked leaf makes the branch fail instead of extracting to deadlock.
    bool strict = false;
    // When every action of a node closes a bad loop, report fail instead of
    // letting ancestors try their other actions.
    bool clever_backtracking = true;
    bool keep_seg = false;
    std::uint64_t node_limit = 0;  // 0 = unlimited
};

struct ExtractStats {
    std::uint64_t nodes_created = 0;
    std::uint64_t nodes_deleted = 0;
    std::uint64_t badloops = 0;
    double wall_ms = 0;
    // log2 of 2^p * prod(n_i) * 2^c for the component's network.
    double log2_bound = 0;
    bool within_bound = true;
};

struct DeadlockLeaf {
    std::vector<std::pair<Name, Behaviour>> stuck;  // non-terminated processes
};

struct ComponentResult {
    std::vector<Name> processes;
    Outcome outcome = Outcome::Fail;
    bool aborted = false;            // node limit reached
    std::string reason;              // deadlock | badloop | limit, when failed
    Choreography choreography;
    std::vector<DeadlockLeaf> deadlocks;
    ExtractStats stats;
    Seg seg;                         // kept when requested
};

struct ExtractResult {
    bool ok = false;
    Program program;
    std::vector<ComponentResult> components;
    ExtractStats stats;              // totals
    std::string failure;             // first failing component and why
    bool has_deadlock() const;
};

ExtractResult extract(const Network& n, const ExtractOptions& opts = {});

// Graphviz rendering of the SEGs kept in r (requires keep_seg).
std::string to_dot(const ExtractResult& r);

}  // namespace chorex
