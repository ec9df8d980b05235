#include "chorex/testgen.hpp"

#include <functional>
#include <map>
#include <optional>

#include "chorex/checks.hpp"
#include "chorex/epp.hpp"
#include "chorex/extraction.hpp"

namespace chorex {

namespace {

using Body = ChoreographyBody;
using BK = Body::Kind;

int count_body(const Body& b, bool ifs_only) {
    switch (b.kind()) {
        case BK::Com:
        case BK::Sel: return (ifs_only ? 0 : 1) + count_body(b.cont(), ifs_only);
        case BK::Cond:
            return 1 + count_body(b.then_branch(), ifs_only) + count_body(b.else_branch(), ifs_only);
        default: return 0;
    }
}

int count(const Choreography& c, bool ifs_only) {
    int n = count_body(c.main, ifs_only);
    for (auto& [x, b] : c.procedures) n += count_body(b, ifs_only);
    return n;
}

struct Generator {
    const GenParams& p;
    Rng rng;
    int next_e = 0, next_l = 0;

    Generator(const GenParams& params, Rng r) : p(params), rng(std::move(r)) {}

    Name proc(int i) const { return "X" + std::to_string(i + 1); }
    Name process(std::uint64_t i) const { return "p" + std::to_string(i + 1); }

    // Endings of guarded bodies are placeholders, resolved once every body exists.
    std::vector<int> slots;  // slot -> unit
    int unit = 0;

    Body ending(bool may_call) {
        if (!may_call || p.defs == 0) return Body::nil();
        slots.push_back(unit);
        return Body::call("slot_" + std::to_string(slots.size() - 1));
    }

    // a interactions and c conditionals; a nonempty body may end in a call.
    Body body(int a, int c, bool guarded) {
        if (a + c == 0) return ending(guarded);
        bool is_cond = uniform(rng, static_cast<std::uint64_t>(a + c)) < static_cast<std::uint64_t>(c);
        if (is_cond) {
            Name who = process(uniform(rng, static_cast<std::uint64_t>(p.processes)));
            std::string e = "e" + std::to_string(++next_e);
            int at = static_cast<int>(uniform(rng, static_cast<std::uint64_t>(a) + 1));
            int ct = static_cast<int>(uniform(rng, static_cast<std::uint64_t>(c)));
            Body t = body(at, ct, true);
            Body f = body(a - at, c - 1 - ct, true);
            return Body::cond(who, e, t, f);
        }
        std::uint64_t i = uniform(rng, static_cast<std::uint64_t>(p.processes));
        std::uint64_t j = uniform(rng, static_cast<std::uint64_t>(p.processes) - 1);
        if (j >= i) ++j;
        Body k = body(a - 1, c, true);
        if (uniform(rng, 2) == 0)
            return Body::com(process(i), "e" + std::to_string(++next_e), process(j), "x", k);
        return Body::sel(process(i), process(j), "L" + std::to_string(++next_l), k);
    }

    // Every procedure gets one call from a body already reachable from main,
    // picked uniformly; the other endings are Nil or a uniform call.
    std::optional<std::vector<Body>> resolve() {
        std::vector<std::optional<Body>> end(slots.size());
        std::vector<std::vector<int>> by_unit(p.defs + 1);
        for (std::size_t s = 0; s < slots.size(); ++s) by_unit[slots[s]].push_back(static_cast<int>(s));
        std::vector<int> open = by_unit[0];
        std::vector<int> unreached;
        for (int k = 0; k < p.defs; ++k) unreached.push_back(k);
        while (!unreached.empty()) {
            if (open.empty()) return std::nullopt;
            std::size_t si = uniform(rng, open.size());
            std::size_t ti = uniform(rng, unreached.size());
            int slot = open[si], target = unreached[ti];
            open.erase(open.begin() + static_cast<std::ptrdiff_t>(si));
            unreached.erase(unreached.begin() + static_cast<std::ptrdiff_t>(ti));
            end[slot] = Body::call(proc(target));
            for (int t : by_unit[target + 1]) open.push_back(t);
        }
        std::vector<Body> out;
        for (auto& e : end) {
            if (!e) {
                std::uint64_t k = uniform(rng, static_cast<std::uint64_t>(p.defs) + 1);
                e = k == 0 ? Body::nil() : Body::call(proc(static_cast<int>(k - 1)));
            }
            out.push_back(*e);
        }
        return out;
    }

    static Body fill(const Body& b, const std::vector<Body>& end) {
        switch (b.kind()) {
            case BK::Call: return end[std::stoul(b.proc().substr(5))];
            case BK::Com: return Body::com(b.p(), b.expr(), b.q(), b.var(), fill(b.cont(), end));
            case BK::Sel: return Body::sel(b.p(), b.q(), b.label(), fill(b.cont(), end));
            case BK::Cond:
                return Body::cond(b.p(), b.expr(), fill(b.then_branch(), end), fill(b.else_branch(), end));
            default: return b;
        }
    }

    std::optional<Choreography> once() {
        int units = p.defs + 1;
        std::vector<int> acts(units, 0), conds(units, 0);
        for (int i = 0; i < p.size - p.ifs; ++i) ++acts[uniform(rng, units)];
        for (int i = 0; i < p.ifs; ++i) ++conds[uniform(rng, units)];
        std::vector<Body> bodies;
        for (int k = 0; k < p.defs; ++k) {
            unit = k + 1;
            bodies.push_back(body(acts[k + 1], conds[k + 1], false));
        }
        unit = 0;
        Body main = body(acts[0], conds[0], true);
        auto end = resolve();
        if (!end) return std::nullopt;
        ChorProcedureList procs;
        for (int k = 0; k < p.defs; ++k) procs.emplace_back(proc(k), fill(bodies[k], *end));
        return Choreography(std::move(procs), fill(main, *end));
    }
};

bool all_reachable(const Choreography& c) {
    std::set<Name> seen;
    std::vector<Body> todo{c.main};
    while (!todo.empty()) {
        Body b = todo.back();
        todo.pop_back();
        switch (b.kind()) {
            case BK::Call:
                if (seen.insert(b.proc()).second)
                    if (auto* d = c.find(b.proc())) todo.push_back(*d);
                break;
            case BK::Com:
            case BK::Sel: todo.push_back(b.cont()); break;
            case BK::Cond:
                todo.push_back(b.then_branch());
                todo.push_back(b.else_branch());
                break;
            default: break;
        }
    }
    return seen.size() == c.procedures.size();
}

}  // namespace

int action_count(const Choreography& c) { return count(c, false); }
int conditional_count(const Choreography& c) { return count(c, true); }

Choreography generate(const GenParams& p) {
    if (p.processes < 2 || p.ifs < 0 || p.size < p.ifs || p.defs < 0)
        throw Error("invalid generator parameters");
    for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
        Generator g(p, Rng(derive_seed(p.seed, attempt)));
        auto c = g.once();
        if (c && all_reachable(*c) && check_choreography(*c).ok) return *c;
    }
    throw Error("generator rejected 1000 candidates");
}

// ------------------------------------------------------------------ amend

namespace {

struct Amender {
    const Choreography& c;
    bool changed = false;

    Behaviour proj(const Body& b, const Name& r) const {
        return project_process(Choreography(c.procedures, b), r).main;
    }

    Body run(const Body& b) {
        switch (b.kind()) {
            case BK::Com:
            case BK::Sel: return Body::prefix(b.action(), run(b.cont()));
            case BK::Cond: {
                Body t = run(b.then_branch());
                Body f = run(b.else_branch());
                std::set<Name> names = process_names(c);
                for (auto& r : process_names(t)) names.insert(r);
                for (auto& r : process_names(f)) names.insert(r);
                for (auto& r : names) {
                    if (r == b.p()) continue;
                    try {
                        merge(proj(t, r), proj(f, r));
                    } catch (const MergeError&) {
                        t = Body::sel(b.p(), r, "thenL", t);
                        f = Body::sel(b.p(), r, "elseL", f);
                        changed = true;
                    }
                }
                return Body::cond(b.p(), b.expr(), t, f);
            }
            default: return b;
        }
    }
};

bool projectable(const Choreography& c) {
    try {
        epp(c);
        return true;
    } catch (const MergeError&) {
        return false;
    }
}

}  // namespace

Choreography amend(const Choreography& c) {
    Choreography cur = c;
    for (int pass = 0; pass < 100 && !projectable(cur); ++pass) {
        Amender a{cur};
        ChorProcedureList procs;
        for (auto& [x, b] : cur.procedures) procs.emplace_back(x, a.run(b));
        Body main = a.run(cur.main);
        cur = Choreography(std::move(procs), std::move(main));
        if (!a.changed) break;
    }
    return cur;
}

// ---------------------------------------------------- inefficiency injection

Choreography inject_inefficiency(const Choreography& c, std::uint64_t seed) {
    Rng rng(seed);
    std::function<Body(const Body&)> run = [&](const Body& b) -> Body {
        switch (b.kind()) {
            case BK::Com:
            case BK::Sel: {
                Body k = run(b.cont());
                ActionLabel a = b.action();
                if (k.kind() == BK::Cond && k.p() != a.p && k.p() != a.q && uniform(rng, 2) == 0)
                    return Body::cond(k.p(), k.expr(), Body::prefix(a, k.then_branch()),
                                      Body::prefix(a, k.else_branch()));
                return Body::prefix(a, k);
            }
            case BK::Cond: {
                Body t = run(b.then_branch());
                Body f = run(b.else_branch());
                if (t.kind() == BK::Cond && f.kind() == BK::Cond && t.p() == f.p() &&
                    t.expr() == f.expr() && t.p() != b.p() && uniform(rng, 2) == 0)
                    return Body::cond(t.p(), t.expr(),
                                      Body::cond(b.p(), b.expr(), t.then_branch(), f.then_branch()),
                                      Body::cond(b.p(), b.expr(), t.else_branch(), f.else_branch()));
                return Body::cond(b.p(), b.expr(), t, f);
            }
            default: return b;
        }
    };
    ChorProcedureList procs;
    for (auto& [x, b] : c.procedures) procs.emplace_back(x, run(b));
    Body main = run(c.main);
    return Choreography(std::move(procs), std::move(main));
}

// -------------------------------------------------------------- behaviours

namespace {

using BhK = Behaviour::Kind;

bool is_action(const Behaviour& b) { return b.kind() != BhK::Nil && b.kind() != BhK::Call; }

// Continuations of an action: one for prefixes, one per branch otherwise.
std::vector<Behaviour> conts(const Behaviour& b) {
    switch (b.kind()) {
        case BhK::Send:
        case BhK::Receive:
        case BhK::Select: return {b.cont()};
        case BhK::Cond: return {b.then_branch(), b.else_branch()};
        case BhK::Offer: {
            std::vector<Behaviour> out;
            for (auto& [l, k] : b.branches()) out.push_back(k);
            return out;
        }
        default: return {};
    }
}

Behaviour with_conts(const Behaviour& b, const std::vector<Behaviour>& ks) {
    switch (b.kind()) {
        case BhK::Send: return Behaviour::send(b.peer(), b.text(), ks[0]);
        case BhK::Receive: return Behaviour::receive(b.peer(), b.text(), ks[0]);
        case BhK::Select: return Behaviour::select(b.peer(), b.text(), ks[0]);
        case BhK::Cond: return Behaviour::cond(b.text(), ks[0], ks[1]);
        case BhK::Offer: {
            Behaviour::Branches br;
            std::size_t i = 0;
            for (auto& [l, k] : b.branches()) br.emplace_back(l, ks[i++]);
            return Behaviour::offer(b.peer(), std::move(br));
        }
        default: return b;
    }
}

int actions_in(const Behaviour& b) {
    if (!is_action(b)) return 0;
    int n = 1;
    for (auto& k : conts(b)) n += actions_in(k);
    return n;
}

// Rewrite the idx-th action in preorder.
Behaviour rewrite_at(const Behaviour& b, int& idx, const std::function<Behaviour(const Behaviour&)>& f) {
    if (!is_action(b)) return b;
    if (idx == 0) {
        idx = -1;
        return f(b);
    }
    --idx;
    auto ks = conts(b);
    for (auto& k : ks) {
        if (idx < 0) break;
        k = rewrite_at(k, idx, f);
    }
    return with_conts(b, ks);
}

Behaviour delete_action(const Behaviour& b) { return conts(b).front(); }

Behaviour swap_action(const Behaviour& b) {
    Behaviour next = conts(b).front();
    if (!is_action(next)) return delete_action(b);
    std::vector<Behaviour> ks;
    for (auto& k : conts(next)) {
        auto mine = conts(b);
        mine[0] = k;
        ks.push_back(with_conts(b, mine));
    }
    return with_conts(next, ks);
}

struct TermEditor {
    ProcessTerm t;

    int total() const {
        int n = actions_in(t.main);
        for (auto& [x, b] : *t.procedures) n += actions_in(b);
        return n;
    }

    void apply(int idx, const std::function<Behaviour(const Behaviour&)>& f) {
        Behaviour m = rewrite_at(t.main, idx, f);
        ProcedureList procs;
        for (auto& [x, b] : *t.procedures) procs.emplace_back(x, idx < 0 ? b : rewrite_at(b, idx, f));
        t = ProcessTerm(std::move(procs), std::move(m));
    }
};

Network replace(const Network& n, std::size_t i, ProcessTerm t) {
    std::vector<std::pair<Name, ProcessTerm>> procs;
    for (std::size_t j = 0; j < n.size(); ++j) procs.emplace_back(n.name(j), j == i ? t : n.term(j));
    return Network(std::move(procs));
}

}  // namespace

Network fuzz(const Network& n, const FuzzParams& p) {
    Rng rng(p.seed);
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < n.size(); ++i)
        if (TermEditor{n.term(i)}.total() > 0) candidates.push_back(i);
    if (candidates.empty()) return n;
    std::size_t who = candidates[uniform(rng, candidates.size())];
    TermEditor ed{n.term(who)};
    for (int k = 0; k < p.deletions; ++k) {
        int total = ed.total();
        if (total == 0) break;
        ed.apply(static_cast<int>(uniform(rng, total)), delete_action);
    }
    for (int k = 0; k < p.swaps; ++k) {
        int total = ed.total();
        if (total == 0) break;
        ed.apply(static_cast<int>(uniform(rng, total)), swap_action);
    }
    return replace(n, who, ed.t);
}

// ----------------------------------------------------------------- unroll

namespace {

int calls_in(const Behaviour& b) {
    if (b.kind() == BhK::Call) return 1;
    int n = 0;
    for (auto& k : conts(b)) n += calls_in(k);
    return n;
}

Behaviour inline_call(const Behaviour& b, int& idx, const ProcessTerm& t) {
    if (b.kind() == BhK::Call) {
        if (idx-- == 0) {
            const Behaviour* body = t.find(b.proc());
            return body ? *body : b;
        }
        return b;
    }
    if (!is_action(b)) return b;
    auto ks = conts(b);
    for (auto& k : ks) k = inline_call(k, idx, t);
    return with_conts(b, ks);
}

Behaviour replace_calls(const Behaviour& b, const Name& x, const Behaviour& with) {
    if (b.kind() == BhK::Call) return b.proc() == x ? with : b;
    if (!is_action(b)) return b;
    auto ks = conts(b);
    for (auto& k : ks) k = replace_calls(k, x, with);
    return with_conts(b, ks);
}

// A1; ...; Am; X with every Ai a single-continuation action.
std::optional<std::vector<Behaviour>> chain_to_self(const Behaviour& body, const Name& x) {
    std::vector<Behaviour> chain;
    Behaviour cur = body;
    while (cur.kind() == BhK::Send || cur.kind() == BhK::Receive || cur.kind() == BhK::Select) {
        chain.push_back(cur);
        cur = cur.cont();
    }
    if (cur.kind() != BhK::Call || cur.proc() != x) return std::nullopt;
    return chain;
}

Behaviour rebuild(const std::vector<Behaviour>& chain, std::size_t from, std::size_t to, Behaviour tail) {
    for (std::size_t i = to; i-- > from;) tail = with_conts(chain[i], {tail});
    return tail;
}

}  // namespace

Network unroll(const Network& n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < n.size(); ++i)
        if (!n.term(i).procedures->empty()) candidates.push_back(i);
    if (candidates.empty()) return n;
    std::size_t who = candidates[uniform(rng, candidates.size())];
    ProcessTerm t = n.term(who);

    int rounds = 1 + static_cast<int>(uniform(rng, 3));
    for (int r = 0; r < rounds; ++r) {
        int total = calls_in(t.main);
        for (auto& [x, b] : *t.procedures) total += calls_in(b);
        if (total == 0) break;
        int idx = static_cast<int>(uniform(rng, total));
        Behaviour m = inline_call(t.main, idx, t);
        ProcedureList procs;
        for (auto& [x, b] : *t.procedures) procs.emplace_back(x, inline_call(b, idx, t));
        t = ProcessTerm(std::move(procs), std::move(m));
    }

    // Shift the closing point of one loop.
    std::vector<std::pair<Name, std::vector<Behaviour>>> loops;
    for (auto& [x, b] : *t.procedures)
        if (auto ch = chain_to_self(b, x); ch && ch->size() >= 2) loops.emplace_back(x, *ch);
    if (!loops.empty()) {
        auto& [x, chain] = loops[uniform(rng, loops.size())];
        std::size_t j = 1 + uniform(rng, chain.size() - 1);
        Name fresh = x + "r";
        while (t.find(fresh)) fresh += "r";
        Behaviour body = rebuild(chain, j, chain.size(), rebuild(chain, 0, j, Behaviour::call(fresh)));
        Behaviour entry = rebuild(chain, 0, j, Behaviour::call(fresh));
        ProcedureList procs;
        for (auto& [y, b] : *t.procedures) {
            if (y == x) continue;
            procs.emplace_back(y, replace_calls(b, x, entry));
        }
        procs.emplace_back(fresh, body);
        t = ProcessTerm(std::move(procs), replace_calls(t.main, x, entry));
    }
    return replace(n, who, t);
}

}  // namespace chorex
