#include "chorex/equiv.hpp"

#include <chrono>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "chorex/parser.hpp"
#include "chorex/semantics.hpp"

namespace chorex {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        case Verdict::Exhausted: return "exhausted";
    }
    return "?";
}

std::string SimResult::to_json() const {
    nlohmann::ordered_json j;
    j["verdict"] = verdict_name(verdict);
    j["pairsExplored"] = pairs_explored;
    if (witness)
        j["witness"] = {{"action", witness->action.to_string()},
                        {"left", witness->left},
                        {"right", witness->right}};
    return j.dump();
}

namespace {

using Body = ChoreographyBody;
using K = Body::Kind;

// Restriction of a choreography to one group of processes that only talk
// among themselves. Actions outside the group vanish; a conditional outside
// the group collapses when both branches restrict to the same term. Calls to
// procedures without any group action become stop, and subterms equal to a
// procedure body are folded back into a call.
class Restrictor {
public:
    Restrictor(const Choreography& c, std::set<Name> group) : g_(std::move(group)) {
        for (auto& [x, b] : c.procedures) {
            auto r = restrict(b, false);
            if (!r) {
                ok_ = false;
                return;
            }
            raw_[x] = *r;
        }
        // Productive: reaches a group action, possibly through calls.
        for (bool changed = true; changed;) {
            changed = false;
            for (auto& [x, b] : raw_)
                if (!productive_.count(x) && has_action(b)) changed |= productive_.insert(x).second;
        }
        for (auto& [x, b] : raw_) {
            if (!productive_.count(x)) continue;
            Body n = normalise(b);
            bodies_[x] = n;
            by_hash_.emplace(n.hash(), x);
        }
    }

    bool ok() const { return ok_; }

    std::optional<Body> apply(const Body& b) {
        memo_.clear();
        return restrict(b, true);
    }

private:
    bool in(const Name& p) const { return g_.count(p) > 0; }

    bool has_action(const Body& b) const {
        switch (b.kind()) {
            case K::Nil:
            case K::Dlock: return false;
            case K::Call: return productive_.count(b.proc()) > 0;
            default: return true;
        }
    }

    Body normalise(const Body& b) const {
        switch (b.kind()) {
            case K::Nil:
            case K::Dlock: return Body::nil();
            case K::Call: return productive_.count(b.proc()) ? b : Body::nil();
            case K::Com:
            case K::Sel: return Body::prefix(b.action(), normalise(b.cont()));
            case K::Cond:
                return Body::cond(b.p(), b.expr(), normalise(b.then_branch()),
                                  normalise(b.else_branch()));
        }
        return b;
    }

    Body refold(Body b) const {
        if (b.kind() == K::Nil || b.kind() == K::Call) return b;
        auto [lo, hi] = by_hash_.equal_range(b.hash());
        for (auto it = lo; it != hi; ++it)
            if (bodies_.at(it->second) == b) return Body::call(it->second);
        return b;
    }

    std::optional<Body> restrict(const Body& b, bool final) {
        if (final && b.id()) {
            auto it = memo_.find(b.id());
            if (it != memo_.end()) return it->second;
        }
        std::optional<Body> out;
        switch (b.kind()) {
            case K::Nil:
            case K::Dlock: out = Body::nil(); break;
            case K::Call:
                if (!final || productive_.count(b.proc()))
                    out = b;
                else
                    out = Body::nil();
                break;
            case K::Com:
            case K::Sel: {
                auto k = restrict(b.cont(), final);
                if (!k) break;
                out = in(b.p()) ? Body::prefix(b.action(), *k) : *k;
                break;
            }
            case K::Cond: {
                auto t = restrict(b.then_branch(), final);
                auto f = restrict(b.else_branch(), final);
                if (!t || !f) break;
                if (in(b.p()))
                    out = Body::cond(b.p(), b.expr(), *t, *f);
                else if (*t == *f)
                    out = *t;
                break;
            }
        }
        if (final && out) out = refold(*out);
        if (final && b.id()) memo_.emplace(b.id(), out);
        return out;
    }

    std::set<Name> g_;
    bool ok_ = true;
    std::map<Name, Body> raw_;
    std::set<Name> productive_;
    std::map<Name, Body> bodies_;
    std::unordered_multimap<std::size_t, Name> by_hash_;
    std::unordered_map<const void*, std::optional<Body>> memo_;
};

// Process groups of a choreography: connected components of "p and q interact".
std::vector<std::set<Name>> groups_of(const Choreography& c) {
    std::set<Name> all = process_names(c);
    std::map<Name, Name> parent;
    for (auto& p : all) parent[p] = p;
    auto find = [&](Name x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<Body> todo{c.main};
    for (auto& [x, b] : c.procedures) todo.push_back(b);
    while (!todo.empty()) {
        Body b = todo.back();
        todo.pop_back();
        switch (b.kind()) {
            case K::Com:
            case K::Sel:
                parent[find(b.p())] = find(b.q());
                todo.push_back(b.cont());
                break;
            case K::Cond:
                todo.push_back(b.then_branch());
                todo.push_back(b.else_branch());
                break;
            default: break;
        }
    }
    std::map<Name, std::set<Name>> g;
    for (auto& p : all) g[find(p)].insert(p);
    std::vector<std::set<Name>> out;
    for (auto& [r, s] : g) out.push_back(s);
    return out;
}

struct BodyHash {
    std::size_t operator()(const Body& b) const { return b.hash(); }
};

struct Restricted {
    bool grouped = false;
    std::vector<Body> parts;
};

struct Side {
    std::vector<ChorSemantics> sems;
    // Per component, one restrictor per group; empty when grouping is unsound.
    std::vector<std::vector<Restrictor>> groups;
    // Per component; bodies recur across many pairs.
    std::vector<std::unordered_map<Body, std::vector<ChorStep>, BodyHash>> steps;
    std::vector<std::unordered_map<Body, Restricted, BodyHash>> keys;

    explicit Side(const Program& p) {
        for (auto& c : p.components) {
            sems.emplace_back(c);
            std::vector<Restrictor> rs;
            for (auto& g : groups_of(c)) {
                rs.emplace_back(sems.back().choreography(), g);
                if (!rs.back().ok()) {
                    rs.clear();
                    break;
                }
            }
            groups.push_back(std::move(rs));
        }
        steps.resize(p.components.size());
        keys.resize(p.components.size());
    }

    const std::vector<ChorStep>& enabled(std::size_t i, const Body& b) {
        auto it = steps[i].find(b);
        if (it == steps[i].end()) it = steps[i].emplace(b, sems[i].enabled(b)).first;
        return it->second;
    }

    const Restricted& restricted(std::size_t i, const Body& b) {
        auto it = keys[i].find(b);
        if (it != keys[i].end()) return it->second;
        Restricted r;
        r.grouped = !groups[i].empty();
        for (auto& g : groups[i]) {
            auto x = g.apply(b);
            if (!x) {
                r.grouped = false;
                break;
            }
            r.parts.push_back(*x);
        }
        if (!r.grouped) r.parts = {b};
        return keys[i].emplace(b, std::move(r)).first->second;
    }
};

using State = std::vector<Body>;

struct Key {
    std::vector<Body> parts;
    std::vector<std::uint8_t> grouped;
    std::size_t hash = 0;
    bool operator==(const Key& o) const {
        return hash == o.hash && grouped == o.grouped && parts == o.parts;
    }
};

Key key_of(Side& side, const State& s) {
    Key k;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Restricted& r = side.restricted(i, s[i]);
        k.grouped.push_back(r.grouped ? 1 : 0);
        for (auto& b : r.parts) k.parts.push_back(b);
    }
    k.hash = 0x51;
    for (auto& b : k.parts) k.hash = hash_mix(k.hash, b.hash());
    for (auto g : k.grouped) k.hash = hash_mix(k.hash, g);
    return k;
}

struct PairKey {
    Key a, b;
    bool operator==(const PairKey& o) const { return a == o.a && b == o.b; }
};
struct PairHash {
    std::size_t operator()(const PairKey& k) const { return hash_mix(k.a.hash, k.b.hash); }
};

std::vector<ChorStep> steps_of(Side& side, const State& s, std::vector<std::size_t>* comp) {
    std::vector<ChorStep> out;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (auto& st : side.enabled(i, s[i])) {
            out.push_back(st);
            if (comp) comp->push_back(i);
        }
    return out;
}

std::string show(const State& s) {
    std::string o;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) o += " || ";
        o += pretty(s[i]);
    }
    return o;
}

}  // namespace

SimResult can_simulate(const Program& a, const Program& b, const SimBudget& budget) {
    auto t0 = std::chrono::steady_clock::now();
    Side sa(a), sb(b);
    State ia, ib;
    for (auto& c : a.components) ia.push_back(c.main);
    for (auto& c : b.components) ib.push_back(c.main);

    SimResult res;
    std::unordered_set<PairKey, PairHash> seen;
    std::deque<std::pair<State, State>> work;
    seen.insert({key_of(sa, ia), key_of(sb, ib)});
    work.emplace_back(std::move(ia), std::move(ib));

    while (!work.empty()) {
        if (res.pairs_explored >= budget.max_pairs) return res;
        if ((res.pairs_explored & 255) == 0) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
            if (static_cast<std::uint64_t>(ms) > budget.max_millis) return res;
        }
        auto [x, y] = std::move(work.front());
        work.pop_front();
        ++res.pairs_explored;

        std::vector<std::size_t> ca, cb;
        auto xs = steps_of(sa, x, &ca);
        auto ys = steps_of(sb, y, &cb);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::size_t j = 0;
            while (j < ys.size() && ys[j].label != xs[i].label) ++j;
            if (j == ys.size()) {
                res.verdict = Verdict::No;
                res.witness = SimWitness{xs[i].label, show(x), show(y)};
                return res;
            }
            State nx = x, ny = y;
            nx[ca[i]] = xs[i].residue;
            ny[cb[j]] = ys[j].residue;
            PairKey k{key_of(sa, nx), key_of(sb, ny)};
            if (seen.insert(std::move(k)).second) work.emplace_back(std::move(nx), std::move(ny));
        }
    }
    res.verdict = Verdict::Yes;
    return res;
}

SimResult can_simulate(const Choreography& a, const Choreography& b, const SimBudget& budget) {
    return can_simulate(Program{{a}}, Program{{b}}, budget);
}

SimResult bisimilar(const Program& a, const Program& b, const SimBudget& budget) {
    SimResult l = can_simulate(a, b, budget);
    if (l.verdict == Verdict::No) return l;
    SimResult r = can_simulate(b, a, budget);
    r.pairs_explored += l.pairs_explored;
    if (r.verdict == Verdict::No) return r;
    if (l.verdict == Verdict::Exhausted) r.verdict = Verdict::Exhausted;
    return r;
}

SimResult bisimilar(const Choreography& a, const Choreography& b, const SimBudget& budget) {
    return bisimilar(Program{{a}}, Program{{b}}, budget);
}

}  // namespace chorex
