#include "chorex/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chorex/checks.hpp"
#include "chorex/epp.hpp"
#include "chorex/equiv.hpp"
#include "chorex/parser.hpp"
#include "chorex/testgen.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace chorex {

std::string RunStats::to_json(bool timing) const {
    ordered_json j;
    j["wallMillis"] = timing ? wall_millis : 0.0;
    j["nodesCreated"] = nodes_created;
    j["nodesDeleted"] = nodes_deleted;
    j["badloops"] = badloops;
    j["components"] = components;
    j["strategy"] = strategy;
    j["seed"] = seed;
    return j.dump(2);
}

RunStats run_stats(const ExtractResult& r, Strategy s, std::uint64_t seed) {
    RunStats st;
    st.wall_millis = r.stats.wall_ms;
    st.nodes_created = r.stats.nodes_created;
    st.nodes_deleted = r.stats.nodes_deleted;
    st.badloops = r.stats.badloops;
    st.components = r.components.size();
    st.strategy = strategy_name(s);
    st.seed = seed;
    return st;
}

std::string manifest_json(const std::vector<CorpusEntry>& entries) {
    ordered_json tests = ordered_json::array();
    for (auto& e : entries) {
        ordered_json j;
        j["id"] = e.id;
        j["params"] = {{"size", e.size}, {"processes", e.processes}, {"ifs", e.ifs}, {"defs", e.defs}};
        j["seed"] = e.seed;
        j["network"] = e.network;
        if (!e.choreography.empty()) j["choreography"] = e.choreography;
        j["expected"] = e.expected;
        tests.push_back(j);
    }
    ordered_json root;
    root["tests"] = tests;
    return root.dump(2) + "\n";
}

std::vector<CorpusEntry> parse_manifest(const std::string& text) {
    auto root = nlohmann::json::parse(text);
    std::vector<CorpusEntry> out;
    for (auto& j : root.at("tests")) {
        CorpusEntry e;
        e.id = j.at("id").get<std::string>();
        auto& p = j.at("params");
        e.size = p.at("size").get<int>();
        e.processes = p.at("processes").get<int>();
        e.ifs = p.at("ifs").get<int>();
        e.defs = p.at("defs").get<int>();
        e.seed = j.at("seed").get<std::uint64_t>();
        e.network = j.at("network").get<std::string>();
        e.choreography = j.value("choreography", std::string());
        e.expected = j.value("expected", std::string("unknown"));
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<CorpusEntry> corpus_grid(const std::string& set, double scale, std::uint64_t seed) {
    int per = std::max(1, static_cast<int>(std::lround(10 * scale)));
    std::vector<CorpusEntry> out;
    auto add = [&](const std::string& name, int size, int procs, int ifs, int defs) {
        for (int t = 0; t < per; ++t) {
            CorpusEntry e;
            std::ostringstream id;
            id << name << "-s" << size << "-p" << procs << "-i" << ifs << "-d" << defs << "-" << t;
            e.id = id.str();
            e.size = size;
            e.processes = procs;
            e.ifs = ifs;
            e.defs = defs;
            e.seed = derive_seed(seed, out.size());
            e.expected = "extractable";
            out.push_back(std::move(e));
        }
    };
    bool all = set == "all";
    bool known = false;
    if (all || set == "size") {
        known = true;
        for (int k = 1; k <= 42; ++k) add("size", 50 * k, 6, 0, 0);
    }
    if (all || set == "processes") {
        known = true;
        for (int k = 1; k <= 20; ++k) add("processes", 500, 5 * k, 0, 0);
    }
    if (all || set == "ifs") {
        known = true;
        for (int k = 1; k <= 4; ++k) add("ifs", 50, 6, 10 * k, 0);
    }
    if (all || set == "ifs-procedures") {
        known = true;
        for (int j = 0; j <= 5; ++j)
            for (int k = 0; k <= 3; ++k) add("ifsproc", 200, 5, j, 5 * k);
    }
    if (all || set == "procedures") {
        known = true;
        for (int k = 1; k <= 15; ++k) add("procs", 20, 5, 8, k);
    }
    if (!known) throw Error("unknown test set '" + set + "'");
    return out;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

std::set<Name> split_names(const std::string& s) {
    std::set<Name> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(item);
    return out;
}

std::uint64_t default_seed() {
    if (const char* s = std::getenv("CHOREX_SEED")) {
        try {
            return std::stoull(s);
        } catch (...) {
        }
    }
    return 0;
}

// File-name prefixed errors for anything the parser rejects.
struct InputError : Error {
    using Error::Error;
};

Network load_network(const std::string& path) {
    std::string text = read_file(path);
    try {
        return parse_network(text);
    } catch (const ParseError& e) {
        throw InputError(path + ":" + e.what());
    }
}

Program load_program(const std::string& path) {
    std::string text = read_file(path);
    try {
        return parse_program(text);
    } catch (const ParseError& e) {
        throw InputError(path + ":" + e.what());
    }
}

std::string fmt_ms(double ms) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << ms;
    return s.str();
}

std::string verdict_of(const ExtractResult& r) {
    if (!r.ok) {
        for (auto& c : r.components)
            if (c.outcome != Outcome::Ok) return c.reason == "limit" ? "limit" : "fail";
        return "fail";
    }
    return r.has_deadlock() ? "deadlock" : "ok";
}

struct ExtractArgs {
    std::string file;
    std::string strategy = "InteractionsFirst";
    std::string services;
    std::uint64_t seed = 0;
    bool no_parallel = false;
    std::string dot;
    std::string stats;
    bool strict = false;
    bool no_timing = false;
    std::uint64_t node_limit = 0;
};

int cmd_extract(const ExtractArgs& a, std::ostream& out, std::ostream& err) {
    auto s = parse_strategy(a.strategy);
    if (!s) {
        err << "error: unknown strategy '" << a.strategy << "'\n";
        return 2;
    }
    Network n = load_network(a.file);
    ExtractOptions o;
    o.strategy = *s;
    o.seed = a.seed;
    o.services = split_names(a.services);
    for (auto& p : o.services)
        if (!n.index(p)) {
            err << "error: service " << p << " is not a process of the network\n";
            return 2;
        }
    o.split_components = !a.no_parallel;
    o.concurrent = !a.no_parallel;
    o.strict = a.strict;
    o.keep_seg = !a.dot.empty();
    o.node_limit = a.node_limit;
    ExtractResult r = extract(n, o);
    if (!a.dot.empty()) write_file(a.dot, to_dot(r));
    if (!a.stats.empty()) write_file(a.stats, run_stats(r, *s, a.seed).to_json(!a.no_timing) + "\n");
    if (!r.ok) {
        err << "error: " << r.failure << "\n";
        return 1;
    }
    out << pretty(r.program);
    for (auto& c : r.components)
        for (auto& d : c.deadlocks) {
            err << "warning: deadlock reached with";
            for (auto& [p, b] : d.stuck) err << " " << p << " at `" << pretty(b) << "`;";
            err << "\n";
        }
    return 0;
}

int cmd_project(const std::string& file, const std::string& declare, std::ostream& out,
                std::ostream& err) {
    Program p = load_program(file);
    try {
        out << pretty(epp(p, split_names(declare)));
    } catch (const MergeError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int cmd_equiv(const std::string& fa, const std::string& fb, const SimBudget& budget,
              std::ostream& out) {
    Program a = load_program(fa);
    Program b = load_program(fb);
    SimResult r = bisimilar(a, b, budget);
    out << r.to_json() << "\n";
    switch (r.verdict) {
        case Verdict::Yes: return 0;
        case Verdict::No: return 1;
        case Verdict::Exhausted: return 3;
    }
    return 3;
}

int cmd_gen(const std::string& dir, const std::string& set, double scale, std::uint64_t seed,
            std::ostream& out) {
    auto entries = corpus_grid(set, scale, seed);
    fs::create_directories(dir);
    const int n = static_cast<int>(entries.size());
    std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        auto& e = entries[i];
        try {
            GenParams gp{e.size, e.processes, e.ifs, e.defs, e.seed};
            Choreography c = amend(generate(gp));
            e.choreography = e.id + ".cc";
            e.network = e.id + ".sp";
            write_file(fs::path(dir) / e.choreography, pretty(c));
            write_file(fs::path(dir) / e.network, pretty(epp(c)));
        } catch (const std::exception& ex) {
            errors[i] = e.id + ": " + ex.what();
        }
    }
    for (auto& m : errors)
        if (!m.empty()) throw Error(m);
    write_file(fs::path(dir) / "manifest.json", manifest_json(entries));
    out << "wrote " << entries.size() << " tests to " << dir << "\n";
    return 0;
}

std::vector<std::pair<int, int>> parse_grid(const std::string& g) {
    std::vector<std::pair<int, int>> out;
    std::stringstream ss(g);
    std::string item;
    while (std::getline(ss, item, ';')) {
        auto comma = item.find(',');
        if (comma == std::string::npos) throw Error("bad grid entry '" + item + "'");
        out.emplace_back(std::stoi(item.substr(0, comma)), std::stoi(item.substr(comma + 1)));
    }
    return out;
}

using Transform = std::function<Network(const Network&, std::uint64_t, int)>;

// Derive a new corpus from an existing one, one file per (input, variant).
int derive_corpus(const std::string& in, const std::string& dir, int variants,
                  const std::function<std::string(int)>& suffix, const Transform& f,
                  std::uint64_t seed, std::ostream& out) {
    auto src = parse_manifest(read_file((fs::path(in) / "manifest.json").string()));
    std::vector<CorpusEntry> entries;
    for (auto& e : src)
        for (int v = 0; v < variants; ++v) {
            CorpusEntry d = e;
            d.id = e.id + "-" + suffix(v);
            d.seed = derive_seed(seed, entries.size());
            d.network = d.id + ".sp";
            d.choreography.clear();
            d.expected = "unknown";
            entries.push_back(std::move(d));
        }
    fs::create_directories(dir);
    const int n = static_cast<int>(entries.size());
    std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            const CorpusEntry& s = src[i / variants];
            Network net = load_network((fs::path(in) / s.network).string());
            write_file(fs::path(dir) / entries[i].network, pretty(f(net, entries[i].seed, i % variants)));
        } catch (const std::exception& ex) {
            errors[i] = entries[i].id + ": " + ex.what();
        }
    }
    for (auto& m : errors)
        if (!m.empty()) throw Error(m);
    write_file(fs::path(dir) / "manifest.json", manifest_json(entries));
    out << "wrote " << entries.size() << " tests to " << dir << "\n";
    return 0;
}

struct BenchArgs {
    std::string in;
    std::string out;
    std::vector<std::string> strategies;
    std::uint64_t seed = 0;
    bool strict = false;
    bool no_timing = false;
    bool no_parallel = false;
    std::uint64_t node_limit = 0;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<Strategy> strategies;
    if (a.strategies.empty()) strategies = all_strategies();
    for (auto& s : a.strategies) {
        auto p = parse_strategy(s);
        if (!p) {
            err << "error: unknown strategy '" << s << "'\n";
            return 2;
        }
        strategies.push_back(*p);
    }
    auto entries = parse_manifest(read_file((fs::path(a.in) / "manifest.json").string()));
    std::vector<Network> nets;
    for (auto& e : entries) nets.push_back(load_network((fs::path(a.in) / e.network).string()));
    const int ns = static_cast<int>(strategies.size());
    const int n = static_cast<int>(entries.size()) * ns;
    std::vector<std::string> rows(n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        const CorpusEntry& e = entries[i / ns];
        Strategy s = strategies[i % ns];
        ExtractOptions o;
        o.strategy = s;
        o.seed = derive_seed(a.seed, i / ns);
        o.strict = a.strict;
        o.split_components = !a.no_parallel;
        o.concurrent = false;
        o.node_limit = a.node_limit;
        ExtractResult r = extract(nets[i / ns], o);
        std::ostringstream row;
        row << e.id << ',' << e.size << ',' << e.processes << ',' << e.ifs << ',' << e.defs << ','
            << strategy_abbrev(s) << ',' << (a.no_timing ? std::string("0") : fmt_ms(r.stats.wall_ms))
            << ',' << r.stats.nodes_created << ',' << r.stats.badloops << ',' << verdict_of(r);
        rows[i] = row.str();
    }
    std::string csv = std::string(kCsvHeader) + "\n";
    for (auto& r : rows) csv += r + "\n";
    if (a.out.empty() || a.out == "-")
        out << csv;
    else
        write_file(a.out, csv);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Choreography extraction and projection toolkit", "chorex"};
    app.require_subcommand(1);
    std::uint64_t env_seed = default_seed();

    ExtractArgs xa;
    xa.seed = env_seed;
    auto* x = app.add_subcommand("extract", "Extract a choreography from a network");
    x->add_option("file", xa.file, "Network file")->required();
    x->add_option("--strategy", xa.strategy, "Action ordering strategy (name or abbreviation)");
    x->add_option("--services", xa.services, "Comma-separated service processes");
    x->add_option("--seed", xa.seed, "Seed for randomised strategies");
    x->add_flag("--no-parallel", xa.no_parallel, "Extract the whole network as one component");
    x->add_option("--dot", xa.dot, "Write the symbolic execution graph as DOT");
    x->add_option("--stats", xa.stats, "Write run statistics as JSON");
    x->add_flag("--strict", xa.strict, "Treat a reachable deadlock as failure");
    x->add_flag("--no-timing", xa.no_timing, "Report zero wall time");
    x->add_option("--node-limit", xa.node_limit, "Give up after this many nodes");

    std::string pfile, declare;
    auto* pr = app.add_subcommand("project", "Project a choreography to a network");
    pr->add_option("file", pfile, "Choreography file")->required();
    pr->add_option("--declare", declare, "Extra comma-separated process names");

    std::string ea, eb;
    SimBudget budget;
    auto* eq = app.add_subcommand("equiv", "Check two choreographies for bisimilarity");
    eq->add_option("a", ea)->required();
    eq->add_option("b", eb)->required();
    eq->add_option("--budget", budget.max_pairs, "Maximum number of explored pairs");
    eq->add_option("--budget-ms", budget.max_millis, "Maximum wall time in milliseconds");

    std::string gdir, gset = "all";
    double gscale = 1.0;
    std::uint64_t gseed = env_seed;
    auto* gen = app.add_subcommand("gen", "Generate a corpus of projectable choreographies");
    gen->add_option("--out", gdir, "Output directory")->required();
    gen->add_option("--set", gset, "size | processes | ifs | ifs-procedures | procedures | all");
    gen->add_option("--scale", gscale, "Scale factor for the number of tests per setting");
    gen->add_option("--seed", gseed);

    std::string fin, fdir, fgrid = "0,1;1,0;2,2";
    std::uint64_t fseed = env_seed;
    auto* fz = app.add_subcommand("fuzz", "Fuzz every network of a corpus");
    fz->add_option("--in", fin, "Input corpus directory")->required();
    fz->add_option("--out", fdir, "Output directory")->required();
    fz->add_option("--grid", fgrid, "Semicolon-separated deletions,swaps pairs");
    fz->add_option("--seed", fseed);

    std::string uin, udir;
    std::uint64_t useed = env_seed;
    auto* un = app.add_subcommand("unroll", "Unroll procedures in every network of a corpus");
    un->add_option("--in", uin, "Input corpus directory")->required();
    un->add_option("--out", udir, "Output directory")->required();
    un->add_option("--seed", useed);

    BenchArgs ba;
    ba.seed = env_seed;
    auto* be = app.add_subcommand("bench", "Extract a corpus with several strategies, as CSV");
    be->add_option("--in", ba.in, "Corpus directory")->required();
    be->add_option("--out", ba.out, "CSV file, '-' for stdout");
    be->add_option("--strategy", ba.strategies, "Strategies to run (default: all)");
    be->add_option("--seed", ba.seed);
    be->add_flag("--strict", ba.strict, "Treat a reachable deadlock as failure");
    be->add_flag("--no-timing", ba.no_timing, "Report zero times");
    be->add_flag("--no-parallel", ba.no_parallel, "Do not split networks into components");
    be->add_option("--node-limit", ba.node_limit, "Give up after this many nodes");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (*x) return cmd_extract(xa, out, err);
        if (*pr) return cmd_project(pfile, declare, out, err);
        if (*eq) return cmd_equiv(ea, eb, budget, out);
        if (*gen) return cmd_gen(gdir, gset, gscale, gseed, out);
        if (*fz) {
            auto grid = parse_grid(fgrid);
            return derive_corpus(
                fin, fdir, static_cast<int>(grid.size()),
                [&](int v) {
                    return "d" + std::to_string(grid[v].first) + "s" + std::to_string(grid[v].second);
                },
                [&](const Network& n, std::uint64_t s, int v) {
                    return fuzz(n, FuzzParams{grid[v].first, grid[v].second, s});
                },
                fseed, out);
        }
        if (*un)
            return derive_corpus(
                uin, udir, 1, [](int) { return std::string("u"); },
                [](const Network& n, std::uint64_t s, int) { return unroll(n, s); }, useed, out);
        if (*be) return cmd_bench(ba, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace chorex
