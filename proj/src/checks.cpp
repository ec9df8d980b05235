#include "chorex/checks.hpp"

#include <functional>
#include <map>
#include <set>

#include <json.hpp>

namespace chorex {

void CheckReport::merge(const CheckReport& o) {
    for (auto& v : o.violations) add(v);
    skipped.insert(skipped.end(), o.skipped.begin(), o.skipped.end());
}

std::string CheckReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (auto& v : violations) {
        nlohmann::json j = {{"kind", v.kind}, {"description", v.description}};
        if (!v.process.empty()) j["process"] = v.process;
        if (!v.procedure.empty()) j["procedure"] = v.procedure;
        arr.push_back(std::move(j));
    }
    return arr.dump();
}

std::string CheckReport::summary() const {
    std::string s;
    for (auto& v : violations) {
        if (!s.empty()) s += "; ";
        s += v.kind + ": " + v.description;
    }
    return s;
}

namespace {

void scan_behaviour(const Behaviour& b, const Name& self, const ProcessTerm& t, const Name& where,
                    CheckReport& r) {
    using K = Behaviour::Kind;
    switch (b.kind()) {
        case K::Nil: return;
        case K::Call:
            if (!t.find(b.proc()))
                r.add({"unresolved-call", self, where,
                       "process " + self + " calls undefined procedure " + b.proc()});
            return;
        case K::Send:
        case K::Receive:
        case K::Select:
        case K::Offer:
            if (b.peer() == self)
                r.add({"self-communication", self, where,
                       "process " + self + " communicates with itself"});
            if (b.kind() == K::Offer) {
                for (auto& [l, c] : b.branches()) scan_behaviour(c, self, t, where, r);
            } else {
                scan_behaviour(b.cont(), self, t, where, r);
            }
            return;
        case K::Cond:
            scan_behaviour(b.then_branch(), self, t, where, r);
            scan_behaviour(b.else_branch(), self, t, where, r);
            return;
    }
}

void collect_calls(const Behaviour& b, std::set<Name>& out) {
    using K = Behaviour::Kind;
    switch (b.kind()) {
        case K::Call: out.insert(b.proc()); break;
        case K::Send:
        case K::Receive:
        case K::Select: collect_calls(b.cont(), out); break;
        case K::Offer:
            for (auto& [l, c] : b.branches()) collect_calls(c, out);
            break;
        case K::Cond:
            collect_calls(b.then_branch(), out);
            collect_calls(b.else_branch(), out);
            break;
        default: break;
    }
}

}  // namespace

CheckReport check_well_formed(const Network& n) {
    CheckReport r;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const Name& p = n.name(i);
        const ProcessTerm& t = n.term(i);
        const auto& procs = *t.procedures;
        for (std::size_t k = 1; k < procs.size(); ++k)
            if (procs[k].first == procs[k - 1].first)
                r.add({"duplicate-procedure", p, procs[k].first,
                       "process " + p + " defines " + procs[k].first + " more than once"});
        scan_behaviour(t.main, p, t, "", r);
        for (auto& [x, b] : procs) scan_behaviour(b, p, t, x, r);
    }
    r.skipped.push_back("conditional guards evaluate to booleans (expressions are opaque)");
    return r;
}

CheckReport check_guardedness(const Network& n) {
    CheckReport r;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const Name& p = n.name(i);
        const ProcessTerm& t = n.term(i);
        // Procedures accessible from main through any constructor.
        std::set<Name> seen;
        std::vector<Name> todo;
        std::set<Name> start;
        collect_calls(t.main, start);
        todo.assign(start.begin(), start.end());
        while (!todo.empty()) {
            Name x = todo.back();
            todo.pop_back();
            if (!seen.insert(x).second) continue;
            if (auto* b = t.find(x)) {
                std::set<Name> next;
                collect_calls(*b, next);
                for (auto& y : next)
                    if (!seen.count(y)) todo.push_back(y);
            }
        }
        // Bare-call chains among accessible procedures must end in a non-call.
        std::set<Name> reported;
        for (auto& x : seen) {
            std::set<Name> chain;
            Name cur = x;
            while (true) {
                const Behaviour* b = t.find(cur);
                if (!b || b->kind() != Behaviour::Kind::Call) break;
                if (!chain.insert(cur).second) {
                    if (!reported.count(cur)) {
                        for (auto& y : chain) reported.insert(y);
                        r.add({"unguarded-call", p, cur,
                               "procedure " + cur + " of process " + p +
                                   " unfolds to a call to itself"});
                    }
                    break;
                }
                cur = b->proc();
            }
        }
    }
    return r;
}

namespace {
void collect_chor_calls(const ChoreographyBody& c, std::set<Name>& out) {
    using K = ChoreographyBody::Kind;
    switch (c.kind()) {
        case K::Call: out.insert(c.proc()); break;
        case K::Com:
        case K::Sel: collect_chor_calls(c.cont(), out); break;
        case K::Cond:
            collect_chor_calls(c.then_branch(), out);
            collect_chor_calls(c.else_branch(), out);
            break;
        default: break;
    }
}
}  // namespace

CheckReport check_choreography(const Choreography& c) {
    CheckReport r;
    const auto& ps = c.procedures;
    for (std::size_t k = 1; k < ps.size(); ++k)
        if (ps[k].first == ps[k - 1].first)
            r.add({"duplicate-procedure", "", ps[k].first,
                   "procedure " + ps[k].first + " is defined more than once"});
    auto unresolved = [&](const ChoreographyBody& b, const Name& where) {
        std::set<Name> calls;
        collect_chor_calls(b, calls);
        for (auto& x : calls)
            if (!c.find(x))
                r.add({"unresolved-call", "", where, "call to undefined procedure " + x});
    };
    unresolved(c.main, "");
    for (auto& [x, b] : ps) {
        unresolved(b, x);
        if (b.kind() == ChoreographyBody::Kind::Call)
            r.add({"unguarded-call", "", x, "procedure " + x + " is a bare call to " + b.proc()});
    }
    return r;
}

}  // namespace chorex
