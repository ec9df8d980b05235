// Command-line front end. The chorex binary is a thin wrapper around run_cli.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chorex/extraction.hpp"

namespace chorex {

struct RunStats {
    double wall_millis = 0;
    std::uint64_t nodes_created = 0;
    std::uint64_t nodes_deleted = 0;
    std::uint64_t badloops = 0;
    std::size_t components = 0;
    std::string strategy;
    std::uint64_t seed = 0;
    std::string to_json(bool timing = true) const;
};

RunStats run_stats(const ExtractResult& r, Strategy s, std::uint64_t seed);

// One entry of a corpus manifest.
struct CorpusEntry {
    std::string id;
    int size = 0, processes = 0, ifs = 0, defs = 0;
    std::uint64_t seed = 0;
    std::string network;       // path relative to the manifest
    std::string choreography;  // may be empty
    std::string expected;      // extractable | unknown
};

std::string manifest_json(const std::vector<CorpusEntry>& entries);
std::vector<CorpusEntry> parse_manifest(const std::string& text);

// Table-shaped parameter grid; tests per point is 10 scaled by `scale`.
std::vector<CorpusEntry> corpus_grid(const std::string& set, double scale, std::uint64_t seed);

inline constexpr const char* kCsvHeader =
    "testId,size,processes,ifs,defs,strategy,timeMs,nodes,badloops,verdict";

// args excludes the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chorex
