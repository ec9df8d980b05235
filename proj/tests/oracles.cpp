#include "oracles.hpp"

#include <deque>
#include <functional>
#include <unordered_map>

namespace chorex::oracle {

bool loop_valid_scan(const std::vector<bool>& white_on_stack, std::size_t target) {
    for (std::size_t i = target; i < white_on_stack.size(); ++i)
        if (white_on_stack[i]) return true;
    return false;
}

// ----------------------------------------------------------- rewrite heads

namespace {

using Body = ChoreographyBody;
using K = Body::Kind;

bool disjoint(const ActionLabel& a, const ActionLabel& b) {
    for (auto& p : process_names_of(a))
        if (b.involves(p)) return false;
    return true;
}

// Every term obtained by one rewrite at the root.
void root_rewrites(const Choreography& c, const Body& b, std::vector<Body>& out) {
    switch (b.kind()) {
        case K::Call:
            if (auto* d = c.find(b.proc())) out.push_back(*d);
            break;
        case K::Com:
        case K::Sel: {
            ActionLabel a = b.action();
            const Body& k = b.cont();
            if ((k.kind() == K::Com || k.kind() == K::Sel) && disjoint(a, k.action()))
                out.push_back(Body::prefix(k.action(), Body::prefix(a, k.cont())));
            if (k.kind() == K::Cond && !a.involves(k.p()))
                out.push_back(Body::cond(k.p(), k.expr(), Body::prefix(a, k.then_branch()),
                                         Body::prefix(a, k.else_branch())));
            break;
        }
        case K::Cond: {
            const Body& t = b.then_branch();
            const Body& f = b.else_branch();
            if ((t.kind() == K::Com || t.kind() == K::Sel) && (f.kind() == K::Com || f.kind() == K::Sel) &&
                t.action() == f.action() && !t.action().involves(b.p()))
                out.push_back(Body::prefix(t.action(), Body::cond(b.p(), b.expr(), t.cont(), f.cont())));
            if (t.kind() == K::Cond && f.kind() == K::Cond && t.p() == f.p() && t.expr() == f.expr() &&
                t.p() != b.p())
                out.push_back(Body::cond(t.p(), t.expr(),
                                         Body::cond(b.p(), b.expr(), t.then_branch(), f.then_branch()),
                                         Body::cond(b.p(), b.expr(), t.else_branch(), f.else_branch())));
            break;
        }
        default: break;
    }
}

void all_rewrites(const Choreography& c, const Body& b, std::vector<Body>& out) {
    root_rewrites(c, b, out);
    switch (b.kind()) {
        case K::Com:
        case K::Sel: {
            std::vector<Body> inner;
            all_rewrites(c, b.cont(), inner);
            for (auto& k : inner) out.push_back(Body::prefix(b.action(), k));
            break;
        }
        case K::Cond: {
            std::vector<Body> inner;
            all_rewrites(c, b.then_branch(), inner);
            for (auto& k : inner) out.push_back(Body::cond(b.p(), b.expr(), k, b.else_branch()));
            inner.clear();
            all_rewrites(c, b.else_branch(), inner);
            for (auto& k : inner) out.push_back(Body::cond(b.p(), b.expr(), b.then_branch(), k));
            break;
        }
        default: break;
    }
}

struct BodyHash {
    std::size_t operator()(const Body& b) const { return b.hash(); }
};

}  // namespace

std::set<ActionLabel> rewrite_heads(const Choreography& c, const ChoreographyBody& body, int depth) {
    std::unordered_map<Body, int, BodyHash> seen;
    std::deque<Body> todo{body};
    seen.emplace(body, 0);
    std::set<ActionLabel> heads;
    while (!todo.empty()) {
        Body b = todo.front();
        todo.pop_front();
        int d = seen[b];
        switch (b.kind()) {
            case K::Com:
            case K::Sel: heads.insert(b.action()); break;
            case K::Cond:
                heads.insert(ActionLabel::then_(b.p(), b.expr()));
                heads.insert(ActionLabel::else_(b.p(), b.expr()));
                break;
            default: break;
        }
        if (d == depth) continue;
        std::vector<Body> next;
        all_rewrites(c, b, next);
        for (auto& n : next)
            if (seen.emplace(n, d + 1).second) todo.push_back(n);
    }
    return heads;
}

// --------------------------------------------------------------------- AES

namespace {
struct AnHash {
    std::size_t operator()(const AnnotatedNetwork& a) const { return a.hash(); }
};
}  // namespace

Aes build_aes(const Network& n, const std::set<Name>& services, std::size_t max_nodes) {
    Aes aes;
    std::unordered_map<AnnotatedNetwork, int, AnHash> ids;
    auto intern = [&](AnnotatedNetwork an) {
        auto it = ids.find(an);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(aes.nodes.size());
        Aes::Node node;
        node.white = an.white();
        node.finished = is_finished(an);
        node.an = an;
        aes.nodes.push_back(std::move(node));
        ids.emplace(std::move(an), id);
        return id;
    };
    intern(initial_network(n, services));
    for (std::size_t v = 0; v < aes.nodes.size(); ++v) {
        if (aes.nodes.size() > max_nodes) {
            aes.truncated = true;
            break;
        }
        if (aes.nodes[v].finished) continue;
        auto steps = enabled_steps(aes.nodes[v].an);
        std::vector<std::vector<int>> options;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            if (steps[i].label.kind == ActionLabel::Kind::Then) {
                int t = intern(steps[i].successor);
                int f = intern(steps[i + 1].successor);
                options.push_back({t, f});
                ++i;
            } else {
                options.push_back({intern(steps[i].successor)});
            }
        }
        aes.nodes[v].options = std::move(options);
    }
    return aes;
}

namespace {
bool leaf_wins(const Aes::Node& n, bool strict) { return n.finished || !strict; }
bool is_leaf(const Aes::Node& n) { return n.finished || n.options.empty(); }
}  // namespace

bool seg_exists(const Aes& aes, bool strict) {
    const std::size_t n = aes.nodes.size();
    auto cpre = [&](std::size_t v, const std::vector<char>& s) {
        for (auto& opt : aes.nodes[v].options) {
            bool all = true;
            for (int w : opt) all = all && s[w];
            if (all) return true;
        }
        return false;
    };
    std::vector<char> z(n, 1);
    for (bool changed = true; changed;) {
        // Y = mu Y. leaves ∪ (white ∩ CPre(Z)) ∪ CPre(Y)
        std::vector<char> y(n, 0);
        for (bool grow = true; grow;) {
            grow = false;
            for (std::size_t v = 0; v < n; ++v) {
                if (y[v]) continue;
                const auto& node = aes.nodes[v];
                bool in = is_leaf(node) ? leaf_wins(node, strict)
                                        : (node.white && cpre(v, z)) || cpre(v, y);
                if (in) y[v] = grow = true;
            }
        }
        changed = y != z;
        z = std::move(y);
    }
    return z[0];
}

std::optional<bool> seg_exists_enumerate(const Aes& aes, bool strict, std::uint64_t limit) {
    const std::size_t n = aes.nodes.size();
    std::uint64_t total = 1;
    for (auto& node : aes.nodes)
        if (!node.options.empty()) {
            total *= node.options.size();
            if (total > limit) return std::nullopt;
        }
    std::vector<std::size_t> choice(n, 0);
    for (std::uint64_t k = 0; k < total; ++k) {
        std::uint64_t rest = k;
        for (std::size_t v = 0; v < n; ++v)
            if (!aes.nodes[v].options.empty()) {
                choice[v] = rest % aes.nodes[v].options.size();
                rest /= aes.nodes[v].options.size();
            }
        // Reachable subgraph under the choice.
        std::vector<char> reach(n, 0);
        std::vector<int> todo{0};
        bool ok = true;
        while (!todo.empty() && ok) {
            int v = todo.back();
            todo.pop_back();
            if (reach[v]) continue;
            reach[v] = 1;
            const auto& node = aes.nodes[v];
            if (is_leaf(node)) {
                ok = leaf_wins(node, strict);
                continue;
            }
            for (int w : node.options[choice[v]]) todo.push_back(w);
        }
        if (!ok) continue;
        // Every cycle must contain a white node: the non-white part is acyclic.
        std::vector<char> colour(n, 0);
        std::function<bool(int)> cyclic = [&](int v) {
            colour[v] = 1;
            const auto& node = aes.nodes[v];
            if (!is_leaf(node))
                for (int w : node.options[choice[v]]) {
                    if (aes.nodes[w].white) continue;
                    if (colour[w] == 1 || (colour[w] == 0 && cyclic(w))) return true;
                }
            colour[v] = 2;
            return false;
        };
        bool bad = false;
        for (std::size_t v = 0; v < n && !bad; ++v)
            if (reach[v] && !aes.nodes[v].white && colour[v] == 0) bad = cyclic(static_cast<int>(v));
        if (!bad) return true;
    }
    return false;
}

}  // namespace chorex::oracle
