#include "chorex/semantics.hpp"

#include <map>
#include <optional>

namespace chorex {

std::size_t Marking::hash() const {
    std::size_t h = 0x3a7;
    for (bool b : marked) h = h * 3 + (b ? 1 : 2);
    return h;
}

Behaviour unfold_head(const ProcessTerm& t, Behaviour b) {
    std::size_t limit = t.procedures->size() + 1;
    while (b.kind() == Behaviour::Kind::Call && limit-- > 0) {
        const Behaviour* body = t.find(b.proc());
        if (!body) break;
        b = *body;
    }
    return b;
}

bool is_terminated(const ProcessTerm& t) { return unfold_head(t, t.main).is_nil(); }

bool AnnotatedNetwork::white() const {
    for (std::size_t i = 0; i < net.size(); ++i)
        if (marking.marked[i] && !marking.is_service(i) && !is_terminated(net.term(i))) return false;
    return true;
}

bool is_finished(const AnnotatedNetwork& an) {
    for (std::size_t i = 0; i < an.net.size(); ++i)
        if (!an.marking.is_service(i) && !is_terminated(an.net.term(i))) return false;
    return true;
}

AnnotatedNetwork initial_network(const Network& n, const std::set<Name>& services) {
    auto svc = std::make_shared<std::vector<bool>>(n.size(), false);
    for (auto& s : services) {
        auto i = n.index(s);
        if (!i) throw Error("service " + s + " is not a process of the network");
        (*svc)[*i] = true;
    }
    AnnotatedNetwork an{n, Marking{std::vector<bool>(n.size(), false), std::move(svc)}};
    for (std::size_t i = 0; i < n.size(); ++i)
        an.marking.marked[i] = (*an.marking.services)[i] || is_terminated(n.term(i));
    return an;
}

Marking next_marking(const AnnotatedNetwork& from, const Network& to, const ActionLabel& a) {
    const Marking& m = from.marking;
    bool reset = true;
    for (std::size_t i = 0; i < m.marked.size() && reset; ++i)
        if (!m.marked[i] && !a.involves(to.name(i))) reset = false;
    Marking out{m.marked, m.services};
    for (std::size_t i = 0; i < out.marked.size(); ++i) {
        if (reset)
            out.marked[i] = m.is_service(i);
        else if (a.involves(to.name(i)))
            out.marked[i] = true;
        if (!out.marked[i] && is_terminated(to.term(i))) out.marked[i] = true;
    }
    return out;
}

std::vector<Step> enabled_steps(const AnnotatedNetwork& an) {
    using K = Behaviour::Kind;
    const Network& n = an.net;
    std::vector<Behaviour> heads;
    heads.reserve(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) heads.push_back(unfold_head(n.term(i), n.term(i).main));

    std::vector<Step> out;
    auto emit = [&](ActionLabel a, std::size_t i, Behaviour bi, std::optional<std::size_t> j,
                    Behaviour bj) {
        Network next = n;
        next.set_main(i, std::move(bi));
        if (j) next.set_main(*j, std::move(bj));
        Marking m = next_marking(an, next, a);
        out.push_back(Step{std::move(a), AnnotatedNetwork{std::move(next), std::move(m)}});
    };

    for (std::size_t i = 0; i < n.size(); ++i) {
        const Behaviour& h = heads[i];
        const Name& p = n.name(i);
        switch (h.kind()) {
            case K::Send: {
                auto j = n.index(h.peer());
                if (!j || *j == i) break;
                const Behaviour& r = heads[*j];
                if (r.kind() != K::Receive || r.peer() != p) break;
                emit(ActionLabel::com(p, h.text(), h.peer(), r.text()), i, h.cont(), j, r.cont());
                break;
            }
            case K::Select: {
                auto j = n.index(h.peer());
                if (!j || *j == i) break;
                const Behaviour& r = heads[*j];
                if (r.kind() != K::Offer || r.peer() != p) break;
                const Behaviour* br = r.branch(h.text());
                if (!br) break;
                emit(ActionLabel::sel(p, h.peer(), h.text()), i, h.cont(), j, *br);
                break;
            }
            case K::Cond:
                emit(ActionLabel::then_(p, h.text()), i, h.then_branch(), std::nullopt, {});
                emit(ActionLabel::else_(p, h.text()), i, h.else_branch(), std::nullopt, {});
                break;
            default: break;
        }
    }
    return out;
}

// ------------------------------------------------------------ choreographies

ChorSemantics::ChorSemantics(const Choreography& c) : c_(c) {
    std::size_t k = 0;
    for (auto& p : process_names(c)) index_[p] = k++;
}

struct ChorSemantics::Scan {
    const ChorSemantics& sem;
    std::size_t words;
    // nullopt marks an unfolding that is still being scanned.
    std::map<std::pair<Name, Mask>, std::optional<std::vector<ChorStep>>> memo;
    Mask full;

    bool blocked(const Mask& m, const Name& p) const {
        auto it = sem.index_.find(p);
        if (it == sem.index_.end()) return false;
        return (m[it->second / 64] >> (it->second % 64)) & 1U;
    }
    Mask with(Mask m, const Name& p) const {
        auto it = sem.index_.find(p);
        if (it != sem.index_.end()) m[it->second / 64] |= std::uint64_t{1} << (it->second % 64);
        return m;
    }

    std::vector<ChorStep> run(const ChoreographyBody& b, const Mask& m) {
        using K = ChoreographyBody::Kind;
        std::vector<ChorStep> out;
        // Nothing below can move once every process is blocked.
        if (m == full) return out;
        switch (b.kind()) {
            case K::Nil:
            case K::Dlock: break;
            case K::Com:
            case K::Sel: {
                ActionLabel a = b.action();
                if (!blocked(m, a.p) && !blocked(m, a.q)) out.push_back({a, b.cont()});
                for (auto& s : run(b.cont(), with(with(m, a.p), a.q)))
                    out.push_back({std::move(s.label), ChoreographyBody::prefix(a, s.residue)});
                break;
            }
            case K::Cond: {
                if (!blocked(m, b.p())) {
                    out.push_back({ActionLabel::then_(b.p(), b.expr()), b.then_branch()});
                    out.push_back({ActionLabel::else_(b.p(), b.expr()), b.else_branch()});
                }
                Mask inner = with(m, b.p());
                auto ts = run(b.then_branch(), inner);
                auto es = run(b.else_branch(), inner);
                for (auto& t : ts)
                    for (auto& e : es)
                        if (t.label == e.label) {
                            out.push_back({t.label, ChoreographyBody::cond(b.p(), b.expr(),
                                                                            t.residue, e.residue)});
                            break;
                        }
                break;
            }
            case K::Call: {
                const ChoreographyBody* body = sem.c_.find(b.proc());
                if (!body) break;
                auto key = std::make_pair(b.proc(), m);
                auto it = memo.find(key);
                if (it != memo.end()) {
                    if (it->second) out = *it->second;
                    break;
                }
                memo.emplace(key, std::nullopt);
                out = run(*body, m);
                memo[key] = out;
                break;
            }
        }
        return out;
    }
};

std::vector<ChorStep> ChorSemantics::enabled(const ChoreographyBody& body) const {
    Scan s{*this, index_.size() / 64 + 1, {}, {}};
    s.full.assign(s.words, 0);
    for (auto& [p, i] : index_) s.full = s.with(s.full, p);
    auto out = s.run(body, Mask(s.words, 0));
    // Keep the first occurrence of each label.
    std::vector<ChorStep> uniq;
    for (auto& st : out) {
        bool dup = false;
        for (auto& u : uniq)
            if (u.label == st.label) {
                dup = true;
                break;
            }
        if (!dup) uniq.push_back(std::move(st));
    }
    return uniq;
}

std::vector<ChorStep> chor_enabled(const Choreography& c, const ChoreographyBody& body) {
    return ChorSemantics(c).enabled(body);
}

}  // namespace chorex
