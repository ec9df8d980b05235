// Serial against OpenMP-parallel extraction.
//
// Components: one network made of k disjoint copies of a generated
// choreography, extracted with and without concurrent component workers.
// Corpus: a batch of independent networks, one extraction each, in a plain
// loop or an OpenMP loop.

#include <benchmark/benchmark.h>

#include <regex>

#include "chorex/epp.hpp"
#include "chorex/extraction.hpp"
#include "chorex/parser.hpp"
#include "chorex/testgen.hpp"

using namespace chorex;

namespace {

Network copies(int k) {
    Choreography c = amend(generate({60, 5, 8, 2, 17}));
    std::string text = pretty(c);
    Program p;
    for (int i = 0; i < k; ++i) {
        std::regex procs(R"(\bp(\d+)\b)");
        p.components.push_back(parse_choreography(std::regex_replace(text, procs, "c" + std::to_string(i) + "p$1")));
    }
    return epp(p);
}

const std::vector<Network>& batch() {
    static const std::vector<Network> nets = [] {
        std::vector<Network> out;
        for (std::uint64_t i = 0; i < 64; ++i)
            out.push_back(epp(amend(generate({40, 5, 6, 2, derive_seed(99, i)}))));
        return out;
    }();
    return nets;
}

void components(benchmark::State& st, bool concurrent) {
    Network n = copies(static_cast<int>(st.range(0)));
    ExtractOptions o;
    o.concurrent = concurrent;
    for (auto _ : st) {
        auto r = extract(n, o);
        if (!r.ok) st.SkipWithError("extraction failed");
        benchmark::DoNotOptimize(r.stats.nodes_created);
    }
}

void BM_ComponentsSerial(benchmark::State& st) { components(st, false); }
void BM_ComponentsParallel(benchmark::State& st) { components(st, true); }

void corpus(benchmark::State& st, bool parallel) {
    const auto& nets = batch();
    const int n = static_cast<int>(nets.size());
    ExtractOptions o;
    o.concurrent = false;
    for (auto _ : st) {
        std::uint64_t nodes = 0;
        if (parallel) {
#pragma omp parallel for schedule(dynamic) reduction(+ : nodes)
            for (int i = 0; i < n; ++i) nodes += extract(nets[i], o).stats.nodes_created;
        } else {
            for (int i = 0; i < n; ++i) nodes += extract(nets[i], o).stats.nodes_created;
        }
        benchmark::DoNotOptimize(nodes);
    }
    st.SetItemsProcessed(st.iterations() * n);
}

void BM_CorpusSerial(benchmark::State& st) { corpus(st, false); }
void BM_CorpusParallel(benchmark::State& st) { corpus(st, true); }

}  // namespace

BENCHMARK(BM_ComponentsSerial)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ComponentsParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CorpusSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorpusParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
