#include "chorex/extraction.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>

#include "chorex/parser.hpp"

namespace chorex {

// ---------------------------------------------------------------- strategies

const std::vector<Strategy>& all_strategies() {
    static const std::vector<Strategy> all = {
        Strategy::Random,           Strategy::LongestFirst,
        Strategy::ShortestFirst,    Strategy::InteractionsFirst,
        Strategy::ConditionalsFirst, Strategy::UnmarkedFirst,
        Strategy::UnmarkedThenInteractions, Strategy::UnmarkedThenSelections,
        Strategy::UnmarkedThenConditionals, Strategy::UnmarkedThenRandom};
    return all;
}

namespace {
struct StrategyInfo {
    Strategy s;
    const char* name;
    const char* abbrev;
};
const StrategyInfo kStrategies[] = {
    {Strategy::Random, "Random", "R"},
    {Strategy::LongestFirst, "LongestFirst", "L"},
    {Strategy::ShortestFirst, "ShortestFirst", "S"},
    {Strategy::InteractionsFirst, "InteractionsFirst", "I"},
    {Strategy::ConditionalsFirst, "ConditionalsFirst", "C"},
    {Strategy::UnmarkedFirst, "UnmarkedFirst", "U"},
    {Strategy::UnmarkedThenInteractions, "UnmarkedThenInteractions", "UI"},
    {Strategy::UnmarkedThenSelections, "UnmarkedThenSelections", "US"},
    {Strategy::UnmarkedThenConditionals, "UnmarkedThenConditionals", "UC"},
    {Strategy::UnmarkedThenRandom, "UnmarkedThenRandom", "UR"},
};
}  // namespace

std::string strategy_name(Strategy s) {
    for (auto& i : kStrategies)
        if (i.s == s) return i.name;
    return "?";
}

std::string strategy_abbrev(Strategy s) {
    for (auto& i : kStrategies)
        if (i.s == s) return i.abbrev;
    return "?";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
    for (auto& i : kStrategies)
        if (s == i.name || s == i.abbrev) return i.s;
    return std::nullopt;
}

std::uint64_t uniform(Rng& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    // Rejection sampling keeps the draw unbiased.
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<Step> order_steps(std::vector<Step> steps, Strategy s, const AnnotatedNetwork& an,
                              Rng& rng) {
    using K = ActionLabel::Kind;
    // Units: an interaction, or a Then/Else pair.
    std::vector<std::vector<std::size_t>> units;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].label.kind == K::Else) continue;
        if (steps[i].label.kind == K::Then)
            units.push_back({i, i + 1});
        else
            units.push_back({i});
    }
    const Network& n = an.net;
    auto unmarked = [&](const ActionLabel& a) {
        for (std::size_t i = 0; i < n.size(); ++i)
            if (!an.marking.marked[i] && a.involves(n.name(i))) return true;
        return false;
    };
    auto largest = [&](const ActionLabel& a) {
        std::size_t m = 0;
        for (std::size_t i = 0; i < n.size(); ++i)
            if (a.involves(n.name(i))) m = std::max(m, n.term(i).main.size());
        return m;
    };
    auto rank = [&](const ActionLabel& a) -> std::vector<long> {
        long inter = a.is_interaction() ? 0 : 1;
        long um = unmarked(a) ? 0 : 1;
        switch (s) {
            case Strategy::Random: return {};
            case Strategy::LongestFirst: return {-static_cast<long>(largest(a))};
            case Strategy::ShortestFirst: return {static_cast<long>(largest(a))};
            case Strategy::InteractionsFirst: return {inter};
            case Strategy::ConditionalsFirst: return {1 - inter};
            case Strategy::UnmarkedFirst: return {um};
            case Strategy::UnmarkedThenInteractions: return {um, inter};
            case Strategy::UnmarkedThenSelections:
                return {um, a.kind == K::Sel ? 0L : a.kind == K::Com ? 1L : 2L};
            case Strategy::UnmarkedThenConditionals: return {um, 1 - inter};
            case Strategy::UnmarkedThenRandom: return {um};
        }
        return {};
    };
    if (s == Strategy::Random || s == Strategy::UnmarkedThenRandom) shuffle(units, rng);
    std::vector<std::vector<long>> keys;
    for (auto& u : units) keys.push_back(rank(steps[u[0]].label));
    std::vector<std::size_t> idx(units.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return keys[a] < keys[b]; });
    std::vector<Step> out;
    out.reserve(steps.size());
    for (auto i : idx)
        for (auto j : units[i]) out.push_back(std::move(steps[j]));
    return out;
}

// -------------------------------------------------------------- loop test

bool is_prefix(std::string_view a, std::string_view b) {
    return a.size() <= b.size() && b.substr(0, a.size()) == a;
}

bool loop_is_valid(const PathStackEntry& target, const PathStackEntry& top, bool top_white) {
    return top.white_below + (top_white ? 1 : 0) - target.white_below >= 1;
}

// ------------------------------------------------------------------- engine

namespace {

struct Engine {
    const ExtractOptions& opts;
    Rng rng;
    Seg seg;
    std::unordered_map<std::size_t, std::vector<int>> index;
    std::vector<PathStackEntry> stack;
    std::vector<int> stack_pos;
    ExtractStats stats;
    bool deadlock_fail = false;
    bool aborted = false;

    // Undo log: node creations (-1 - id) and edge additions (source id).
    std::vector<int> log;

    Engine(const ExtractOptions& o, std::uint64_t seed) : opts(o), rng(seed) {}

    int create(AnnotatedNetwork an, ChoicePath path) {
        int id = static_cast<int>(seg.nodes.size());
        SegNode node;
        node.white = an.white();
        node.an = std::move(an);
        node.path = std::move(path);
        index[node.an.hash()].push_back(id);
        seg.nodes.push_back(std::move(node));
        stack_pos.push_back(-1);
        log.push_back(-1 - id);
        ++stats.nodes_created;
        if (opts.node_limit && stats.nodes_created > opts.node_limit) aborted = true;
        return id;
    }

    void add_edge(int from, ActionLabel a, int to) {
        seg.nodes[from].out.push_back({std::move(a), to});
        log.push_back(from);
    }

    void rollback(std::size_t cp) {
        while (log.size() > cp) {
            int e = log.back();
            log.pop_back();
            if (e >= 0) {
                seg.nodes[e].out.pop_back();
                continue;
            }
            int id = -1 - e;
            auto& bucket = index[seg.nodes[id].an.hash()];
            bucket.pop_back();
            seg.nodes.pop_back();
            stack_pos.pop_back();
            ++stats.nodes_deleted;
        }
    }

    std::optional<int> lookup(const AnnotatedNetwork& an, const ChoicePath& path) const {
        auto it = index.find(an.hash());
        if (it == index.end()) return std::nullopt;
        for (int id : it->second) {
            const SegNode& n = seg.nodes[id];
            if (is_prefix(n.path, path) && n.an == an) return id;
        }
        return std::nullopt;
    }

    void push(int id) {
        PathStackEntry e{id, 0};
        if (!stack.empty()) {
            const auto& top = stack.back();
            e.white_below = top.white_below + (seg.nodes[top.node].white ? 1 : 0);
        }
        stack_pos[id] = static_cast<int>(stack.size());
        stack.push_back(e);
    }

    void pop() {
        stack_pos[stack.back().node] = -1;
        stack.pop_back();
    }

    // One edge from node under label, to an existing ancestor or a fresh child.
    Outcome edge(int node, const Step& step, const ChoicePath& child_path) {
        const ChoicePath& path = seg.nodes[node].path;
        if (auto target = lookup(step.successor, path)) {
            int pos = stack_pos[*target];
            if (pos < 0) throw Error("internal: loop target is not on the path stack");
            if (!loop_is_valid(stack[pos], stack.back(), seg.nodes[node].white)) {
                ++stats.badloops;
                return Outcome::Badloop;
            }
            add_edge(node, step.label, *target);
            return Outcome::Ok;
        }
        std::size_t cp = log.size();
        int child = create(step.successor, child_path);
        add_edge(node, step.label, child);
        push(child);
        Outcome r = build_graph(child);
        pop();
        if (r != Outcome::Ok) rollback(cp);
        return r;
    }

    Outcome build_communication(int node, const Step& step) {
        return edge(node, step, seg.nodes[node].path);
    }

    Outcome build_conditional(int node, const Step& then_step, const Step& else_step) {
        std::size_t cp = log.size();
        ChoicePath base = seg.nodes[node].path;
        Outcome r = edge(node, then_step, base + '0');
        if (r != Outcome::Ok) return r;
        r = edge(node, else_step, base + '1');
        if (r != Outcome::Ok) rollback(cp);
        return r;
    }

    Outcome build_graph(int node) {
        if (aborted) return Outcome::Fail;
        const AnnotatedNetwork& an = seg.nodes[node].an;
        if (is_finished(an)) {
            seg.nodes[node].leaf = SegNode::Leaf::Terminal;
            return Outcome::Ok;
        }
        std::vector<Step> steps = enabled_steps(an);
        if (steps.empty()) {
            if (opts.strict) {
                deadlock_fail = true;
                return Outcome::Fail;
            }
            seg.nodes[node].leaf = SegNode::Leaf::Deadlock;
            return Outcome::Ok;
        }
        steps = order_steps(std::move(steps), opts.strategy, seg.nodes[node].an, rng);
        for (std::size_t i = 0; i < steps.size(); ++i) {
            std::size_t cp = log.size();
            Outcome r;
            if (steps[i].label.kind == ActionLabel::Kind::Then) {
                r = build_conditional(node, steps[i], steps[i + 1]);
                ++i;
            } else {
                r = build_communication(node, steps[i]);
            }
            if (r == Outcome::Ok) return r;
            rollback(cp);
            if (r == Outcome::Fail || aborted) return Outcome::Fail;
        }
        return opts.clever_backtracking ? Outcome::Fail : Outcome::Badloop;
    }

    Outcome run(const AnnotatedNetwork& start) {
        int root = create(start, "");
        seg.root = root;
        push(root);
        Outcome r = build_graph(root);
        pop();
        return r == Outcome::Ok ? r : Outcome::Fail;
    }
};

double log2_node_bound(const Network& n) {
    double b = static_cast<double>(n.size());
    std::size_t conds = 0;
    std::function<void(const Behaviour&)> count = [&](const Behaviour& x) {
        using K = Behaviour::Kind;
        switch (x.kind()) {
            case K::Cond:
                ++conds;
                count(x.then_branch());
                count(x.else_branch());
                break;
            case K::Send:
            case K::Receive:
            case K::Select: count(x.cont()); break;
            case K::Offer:
                for (auto& [l, c] : x.branches()) count(c);
                break;
            default: break;
        }
    };
    for (std::size_t i = 0; i < n.size(); ++i) {
        const ProcessTerm& t = n.term(i);
        b += std::log2(static_cast<double>(t.size()));
        count(t.main);
        for (auto& [x, body] : *t.procedures) count(body);
    }
    return b + static_cast<double>(conds);
}

}  // namespace

// ------------------------------------------------------------ SEG checking

std::string check_seg(const Seg& seg) {
    const auto& ns = seg.nodes;
    if (seg.root < 0 || seg.root >= static_cast<int>(ns.size())) return "missing root";
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const SegNode& n = ns[i];
        std::string at = "node " + std::to_string(i) + ": ";
        if (n.white != n.an.white()) return at + "stale whiteness";
        if (n.leaf != SegNode::Leaf::None) {
            if (!n.out.empty()) return at + "leaf with outgoing edges";
            bool fin = is_finished(n.an);
            if (n.leaf == SegNode::Leaf::Terminal && !fin) return at + "terminal leaf not finished";
            if (n.leaf == SegNode::Leaf::Deadlock && (fin || !enabled_steps(n.an).empty()))
                return at + "deadlock leaf can still move";
            continue;
        }
        if (n.out.size() == 1) {
            if (!n.out[0].label.is_interaction()) return at + "single non-interaction edge";
        } else if (n.out.size() == 2) {
            const auto& a = n.out[0].label;
            const auto& b = n.out[1].label;
            if (a.kind != ActionLabel::Kind::Then || b.kind != ActionLabel::Kind::Else || a.p != b.p ||
                a.e != b.e)
                return at + "two edges that are not a then/else pair";
        } else {
            return at + "bad out-degree " + std::to_string(n.out.size());
        }
        auto steps = enabled_steps(n.an);
        for (auto& e : n.out) {
            if (e.target < 0 || e.target >= static_cast<int>(ns.size())) return at + "dangling edge";
            auto it = std::find_if(steps.begin(), steps.end(),
                                   [&](const Step& s) { return s.label == e.label; });
            if (it == steps.end()) return at + "edge label not enabled: " + e.label.to_string();
            if (!(it->successor == ns[e.target].an))
                return at + "edge target differs from successor of " + e.label.to_string();
        }
    }
    // Reachability.
    std::vector<char> seen(ns.size(), 0);
    std::vector<int> todo{seg.root};
    while (!todo.empty()) {
        int v = todo.back();
        todo.pop_back();
        if (seen[v]) continue;
        seen[v] = 1;
        for (auto& e : ns[v].out) todo.push_back(e.target);
    }
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (!seen[i]) return "node " + std::to_string(i) + " unreachable";
    // Every cycle passes through a white node: non-white subgraph is acyclic.
    std::vector<char> colour(ns.size(), 0);
    std::function<bool(int)> cyclic = [&](int v) {
        colour[v] = 1;
        for (auto& e : ns[v].out) {
            int w = e.target;
            if (ns[w].white) continue;
            if (colour[w] == 1) return true;
            if (colour[w] == 0 && cyclic(w)) return true;
        }
        colour[v] = 2;
        return false;
    };
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (!ns[i].white && colour[i] == 0 && cyclic(static_cast<int>(i)))
            return "loop without a white node";
    return "";
}

// -------------------------------------------------------------- read-off

Dag unroll_graph(const Seg& seg) {
    const auto& ns = seg.nodes;
    std::vector<int> indeg(ns.size(), 0);
    for (auto& n : ns)
        for (auto& e : n.out) ++indeg[e.target];
    Dag d;
    d.proc_of.assign(ns.size(), -1);
    std::vector<char> seen(ns.size(), 0);
    // Iterative preorder so that names follow discovery order.
    std::vector<int> todo{seg.root};
    while (!todo.empty()) {
        int v = todo.back();
        todo.pop_back();
        if (seen[v]) continue;
        seen[v] = 1;
        if (indeg[v] > 1 || (v == seg.root && indeg[v] >= 1)) {
            d.proc_of[v] = static_cast<int>(d.loop_nodes.size());
            d.loop_nodes.push_back(v);
        }
        for (auto it = ns[v].out.rbegin(); it != ns[v].out.rend(); ++it)
            if (!seen[it->target]) todo.push_back(it->target);
    }
    // The split graph must be acyclic.
    std::vector<char> colour(ns.size(), 0);
    std::function<void(int)> visit = [&](int v) {
        colour[v] = 1;
        for (auto& e : ns[v].out) {
            int w = e.target;
            if (d.proc_of[w] >= 0) continue;
            if (colour[w] == 1) throw Error("internal: cycle survives DAG-ification");
            if (colour[w] == 0) visit(w);
        }
        colour[v] = 2;
    };
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (colour[i] == 0) visit(static_cast<int>(i));
    return d;
}

namespace {
std::string proc_name(int k) { return "X" + std::to_string(k + 1); }
}  // namespace

Choreography build_choreography(const Seg& seg, const Dag& dag) {
    const auto& ns = seg.nodes;
    std::function<ChoreographyBody(int)> body;
    auto ref = [&](int v) {
        if (dag.proc_of[v] >= 0) return ChoreographyBody::call(proc_name(dag.proc_of[v]));
        return body(v);
    };
    body = [&](int v) -> ChoreographyBody {
        const SegNode& n = ns[v];
        if (n.leaf == SegNode::Leaf::Terminal) return ChoreographyBody::nil();
        if (n.leaf == SegNode::Leaf::Deadlock) return ChoreographyBody::dlock();
        if (n.out.size() == 1) return ChoreographyBody::prefix(n.out[0].label, ref(n.out[0].target));
        const auto& t = n.out[0];
        const auto& f = n.out[1];
        return ChoreographyBody::cond(t.label.p, t.label.e, ref(t.target), ref(f.target));
    };
    ChorProcedureList procs;
    for (std::size_t k = 0; k < dag.loop_nodes.size(); ++k)
        procs.emplace_back(proc_name(static_cast<int>(k)), body(dag.loop_nodes[k]));
    ChoreographyBody main = ref(seg.root);
    return Choreography(std::move(procs), std::move(main));
}

// ------------------------------------------------------ component split

std::vector<std::vector<Name>> communication_components(const Network& n) {
    std::vector<std::size_t> parent(n.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::function<void(std::size_t, const Behaviour&)> scan = [&](std::size_t i, const Behaviour& b) {
        using K = Behaviour::Kind;
        switch (b.kind()) {
            case K::Send:
            case K::Receive:
            case K::Select:
            case K::Offer:
                if (auto j = n.index(b.peer())) parent[find(i)] = find(*j);
                if (b.kind() == K::Offer) {
                    for (auto& [l, c] : b.branches()) scan(i, c);
                } else {
                    scan(i, b.cont());
                }
                break;
            case K::Cond:
                scan(i, b.then_branch());
                scan(i, b.else_branch());
                break;
            default: break;
        }
    };
    for (std::size_t i = 0; i < n.size(); ++i) {
        scan(i, n.term(i).main);
        for (auto& [x, b] : *n.term(i).procedures) scan(i, b);
    }
    std::map<std::size_t, std::vector<Name>> groups;
    for (std::size_t i = 0; i < n.size(); ++i) groups[find(i)].push_back(n.name(i));
    std::vector<std::vector<Name>> out;
    for (auto& [r, g] : groups) out.push_back(g);
    std::sort(out.begin(), out.end());
    return out;
}

// ------------------------------------------------------------- top level

bool ExtractResult::has_deadlock() const {
    for (auto& c : components)
        if (!c.deadlocks.empty()) return true;
    return false;
}

namespace {

Network sub_network(const Network& n, const std::vector<Name>& names) {
    std::vector<std::pair<Name, ProcessTerm>> procs;
    for (auto& p : names) procs.emplace_back(p, *n.find(p));
    return Network(std::move(procs));
}

ComponentResult extract_component(const Network& n, const ExtractOptions& opts, std::uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    ComponentResult res;
    res.processes = n.names();
    std::set<Name> svc;
    for (auto& s : opts.services)
        if (n.index(s)) svc.insert(s);
    Engine eng(opts, seed);
    res.outcome = eng.run(initial_network(n, svc));
    res.stats = eng.stats;
    res.stats.log2_bound = log2_node_bound(n);
    res.stats.within_bound =
        std::log2(static_cast<double>(std::max<std::uint64_t>(1, eng.stats.nodes_created))) <=
        res.stats.log2_bound + 1e-9;
    if (res.outcome == Outcome::Ok) {
        Dag dag = unroll_graph(eng.seg);
        res.choreography = build_choreography(eng.seg, dag);
        for (auto& node : eng.seg.nodes) {
            if (node.leaf != SegNode::Leaf::Deadlock) continue;
            DeadlockLeaf d;
            for (std::size_t i = 0; i < node.an.net.size(); ++i)
                if (!node.an.marking.is_service(i) && !is_terminated(node.an.net.term(i)))
                    d.stuck.emplace_back(node.an.net.name(i), node.an.net.term(i).main);
            res.deadlocks.push_back(std::move(d));
        }
    } else {
        res.aborted = eng.aborted;
        res.reason = eng.aborted ? "limit" : eng.deadlock_fail ? "deadlock" : "badloop";
    }
    if (opts.keep_seg) res.seg = std::move(eng.seg);
    res.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace

ExtractResult extract(const Network& n, const ExtractOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::vector<Name>> comps;
    if (opts.split_components)
        comps = communication_components(n);
    else
        comps.push_back(n.names());

    ExtractResult out;
    out.components.resize(comps.size());
    const int count = static_cast<int>(comps.size());
    if (opts.concurrent && count > 1) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < count; ++i)
            out.components[i] =
                extract_component(sub_network(n, comps[i]), opts, derive_seed(opts.seed, i));
    } else {
        for (int i = 0; i < count; ++i)
            out.components[i] =
                extract_component(sub_network(n, comps[i]), opts, derive_seed(opts.seed, i));
    }

    out.ok = true;
    for (auto& c : out.components) {
        out.stats.nodes_created += c.stats.nodes_created;
        out.stats.nodes_deleted += c.stats.nodes_deleted;
        out.stats.badloops += c.stats.badloops;
        out.stats.log2_bound = std::max(out.stats.log2_bound, c.stats.log2_bound);
        out.stats.within_bound = out.stats.within_bound && c.stats.within_bound;
        if (c.outcome != Outcome::Ok && out.ok) {
            out.ok = false;
            std::string who;
            for (auto& p : c.processes) who += (who.empty() ? "" : ",") + p;
            out.failure = "no valid SEG for component {" + who + "} (" + c.reason + ")";
        }
    }
    if (out.ok) {
        for (auto& c : out.components)
            if (!c.choreography.main.is_nil() || !c.choreography.procedures.empty())
                out.program.components.push_back(c.choreography);
        if (out.program.components.empty()) out.program.components.push_back(Choreography());
    }
    out.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// -------------------------------------------------------------------- DOT

namespace {
std::string dot_escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '"' || c == '\\') o += '\\';
        if (c == '\n') {
            o += "\\l";
            continue;
        }
        o += c;
    }
    return o;
}
}  // namespace

std::string to_dot(const ExtractResult& r) {
    std::string o = "digraph seg {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (std::size_t k = 0; k < r.components.size(); ++k) {
        const Seg& seg = r.components[k].seg;
        std::string pre = "c" + std::to_string(k) + "n";
        o += "  subgraph cluster_" + std::to_string(k) + " {\n";
        for (std::size_t i = 0; i < seg.nodes.size(); ++i) {
            const SegNode& n = seg.nodes[i];
            std::string label;
            for (std::size_t j = 0; j < n.an.net.size(); ++j) {
                label += n.an.net.name(j) + (n.an.marking.marked[j] ? "*" : "") + ": " +
                         pretty(n.an.net.term(j).main) + "\n";
            }
            label += "path: " + (n.path.empty() ? std::string("-") : n.path) + "\n";
            if (n.leaf == SegNode::Leaf::Deadlock) label += "deadlock\n";
            o += "    " + pre + std::to_string(i) + " [label=\"" + dot_escape(label) + "\"" +
                 (n.white ? ", style=bold" : "") + "];\n";
        }
        for (std::size_t i = 0; i < seg.nodes.size(); ++i)
            for (auto& e : seg.nodes[i].out)
                o += "    " + pre + std::to_string(i) + " -> " + pre + std::to_string(e.target) +
                     " [label=\"" + dot_escape(e.label.to_string()) + "\"];\n";
        o += "  }\n";
    }
    return o + "}\n";
}

}  // namespace chorex
