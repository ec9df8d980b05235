#include "chorex/epp.hpp"

#include <map>

namespace chorex {

namespace {

std::string head_of(const Behaviour& b) {
    using K = Behaviour::Kind;
    switch (b.kind()) {
        case K::Nil: return "stop";
        case K::Call: return b.proc();
        case K::Send: return b.peer() + "!<" + b.text() + ">";
        case K::Receive: return b.peer() + "?" + b.text();
        case K::Select: return b.peer() + "+" + b.text();
        case K::Offer: return b.peer() + "&{...}";
        case K::Cond: return "if " + b.text();
    }
    return "";
}

}  // namespace

MergeError::MergeError(std::string l, std::string r)
    : Error("cannot merge '" + l + "' with '" + r + "'"), left(std::move(l)), right(std::move(r)) {}

MergeError::MergeError(const MergeError& inner, Name p, std::string w)
    : Error("process " + p + ": branches of " + w + " are not mergeable (" + inner.left +
            " vs " + inner.right + ")"),
      process(std::move(p)),
      where(std::move(w)),
      left(inner.left),
      right(inner.right) {}

Behaviour merge(const Behaviour& a, const Behaviour& b) {
    using K = Behaviour::Kind;
    if (a == b) return a;
    auto clash = [&]() -> MergeError { return MergeError(head_of(a), head_of(b)); };
    if (a.kind() != b.kind() || a.peer() != b.peer() || a.text() != b.text()) throw clash();
    switch (a.kind()) {
        case K::Nil:
        case K::Call: return a;
        case K::Send: return Behaviour::send(a.peer(), a.text(), merge(a.cont(), b.cont()));
        case K::Receive: return Behaviour::receive(a.peer(), a.text(), merge(a.cont(), b.cont()));
        case K::Select: return Behaviour::select(a.peer(), a.text(), merge(a.cont(), b.cont()));
        case K::Cond:
            return Behaviour::cond(a.text(), merge(a.then_branch(), b.then_branch()),
                                   merge(a.else_branch(), b.else_branch()));
        case K::Offer: {
            Behaviour::Branches out;
            for (auto& [l, c] : a.branches()) {
                const Behaviour* other = b.branch(l);
                out.emplace_back(l, other ? merge(c, *other) : c);
            }
            for (auto& [l, c] : b.branches())
                if (!a.branch(l)) out.emplace_back(l, c);
            return Behaviour::offer(a.peer(), std::move(out));
        }
    }
    throw clash();
}

std::map<Name, std::set<Name>> procedure_involvement(const Choreography& c) {
    std::map<Name, std::set<Name>> inv;
    std::map<Name, std::set<Name>> calls;
    for (auto& [x, b] : c.procedures) {
        inv[x] = process_names(b);
        std::vector<ChoreographyBody> todo{b};
        while (!todo.empty()) {
            ChoreographyBody cur = todo.back();
            todo.pop_back();
            switch (cur.kind()) {
                case ChoreographyBody::Kind::Call: calls[x].insert(cur.proc()); break;
                case ChoreographyBody::Kind::Com:
                case ChoreographyBody::Kind::Sel: todo.push_back(cur.cont()); break;
                case ChoreographyBody::Kind::Cond:
                    todo.push_back(cur.then_branch());
                    todo.push_back(cur.else_branch());
                    break;
                default: break;
            }
        }
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (auto& [x, ys] : calls)
            for (auto& y : ys) {
                auto it = inv.find(y);
                if (it == inv.end()) continue;
                for (auto& p : it->second) changed |= inv[x].insert(p).second;
            }
    }
    return inv;
}

namespace {

struct Projector {
    const Name& r;
    const std::map<Name, std::set<Name>>& inv;
    std::string where;

    bool involved(const Name& x) const {
        auto it = inv.find(x);
        return it != inv.end() && it->second.count(r);
    }

    Behaviour run(const ChoreographyBody& c) {
        using K = ChoreographyBody::Kind;
        switch (c.kind()) {
            case K::Nil: return Behaviour::nil();
            case K::Dlock: throw Error("cannot project a deadlocked choreography");
            case K::Call: return involved(c.proc()) ? Behaviour::call(c.proc()) : Behaviour::nil();
            case K::Com:
                if (r == c.p()) return Behaviour::send(c.q(), c.expr(), run(c.cont()));
                if (r == c.q()) return Behaviour::receive(c.p(), c.var(), run(c.cont()));
                return run(c.cont());
            case K::Sel:
                if (r == c.p()) return Behaviour::select(c.q(), c.label(), run(c.cont()));
                if (r == c.q()) return Behaviour::offer(c.p(), {{c.label(), run(c.cont())}});
                return run(c.cont());
            case K::Cond: {
                Behaviour t = run(c.then_branch());
                Behaviour f = run(c.else_branch());
                if (r == c.p()) return Behaviour::cond(c.expr(), t, f);
                try {
                    return merge(t, f);
                } catch (const MergeError& e) {
                    if (!e.process.empty()) throw;
                    throw MergeError(e, r, "if " + c.p() + "." + c.expr() + " in " + where);
                }
            }
        }
        return Behaviour::nil();
    }
};

}  // namespace

ProcessTerm project_process(const Choreography& c, const Name& r) {
    auto inv = procedure_involvement(c);
    Projector pr{r, inv, "main"};
    Behaviour m = pr.run(c.main);
    ProcedureList procs;
    for (auto& [x, b] : c.procedures) {
        if (!pr.involved(x)) continue;
        pr.where = "procedure " + x;
        procs.emplace_back(x, pr.run(b));
    }
    return ProcessTerm(std::move(procs), std::move(m));
}

Network epp(const Choreography& c, const std::set<Name>& declared) {
    std::set<Name> names = process_names(c);
    names.insert(declared.begin(), declared.end());
    if (names.empty()) throw Error("choreography has no processes; declare at least one");
    std::vector<std::pair<Name, ProcessTerm>> procs;
    for (auto& r : names) procs.emplace_back(r, project_process(c, r));
    return Network(std::move(procs));
}

Network epp(const Program& p, const std::set<Name>& declared) {
    std::vector<std::pair<Name, ProcessTerm>> procs;
    std::set<Name> seen;
    for (auto& c : p.components)
        for (auto& r : process_names(c))
            if (seen.insert(r).second) procs.emplace_back(r, project_process(c, r));
    for (auto& r : declared)
        if (seen.insert(r).second) procs.emplace_back(r, ProcessTerm());
    if (procs.empty()) throw Error("program has no processes; declare at least one");
    return Network(std::move(procs));
}

}  // namespace chorex
