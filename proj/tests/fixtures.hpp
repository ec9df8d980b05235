// Shared helpers for the unit tests and the acceptance runner.
#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "chorex/checks.hpp"
#include "chorex/epp.hpp"
#include "chorex/equiv.hpp"
#include "chorex/extraction.hpp"
#include "chorex/parser.hpp"
#include "chorex/testgen.hpp"

#ifndef CHOREX_CORPUS_DIR
#define CHOREX_CORPUS_DIR "corpus"
#endif

namespace chorex::fixtures {

inline std::string corpus(const std::string& name) { return std::string(CHOREX_CORPUS_DIR) + "/" + name; }

inline std::string read(const std::string& name) {
    std::ifstream in(corpus(name));
    if (!in) throw Error("missing fixture " + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline Network network(const std::string& name) { return parse_network(read(name)); }
inline Program program(const std::string& name) { return parse_program(read(name)); }

// Extraction with the SEG kept and re-checked. Returns the first problem
// found by the independent checks, or an empty string.
inline std::string audit(const ExtractResult& r) {
    for (auto& c : r.components) {
        if (!c.stats.within_bound) return "node bound exceeded";
        if (c.outcome != Outcome::Ok) continue;
        if (auto e = check_seg(c.seg); !e.empty()) return e;
        std::size_t live = c.stats.nodes_created - c.stats.nodes_deleted;
        if (live != c.seg.nodes.size()) return "node accounting mismatch";
    }
    return "";
}

inline ExtractResult extract_kept(const Network& n, ExtractOptions o = {}) {
    o.keep_seg = true;
    return extract(n, o);
}

// Parameters of the desk-scale round-trip corpus.
inline GenParams roundtrip_params(std::uint64_t i, std::uint64_t seed) {
    Rng rng(derive_seed(seed, i));
    GenParams p;
    p.size = 1 + static_cast<int>(uniform(rng, 50));
    p.processes = 2 + static_cast<int>(uniform(rng, 5));
    p.ifs = static_cast<int>(uniform(rng, std::min(10, p.size) + 1));
    // Each procedure needs some actions of its own to be reachable.
    p.defs = static_cast<int>(uniform(rng, std::min(3, p.size / 3) + 1));
    p.seed = derive_seed(seed ^ 0x5eed, i);
    return p;
}

}  // namespace chorex::fixtures
