#include "chorex/core.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace chorex {

std::size_t hash_str(std::string_view s) { return std::hash<std::string_view>{}(s); }

bool is_identifier(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

bool is_expression_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

bool is_expression(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && is_expression_char(s[i])) ++i;
    if (i == s.size()) return i > 0;
    if (s[i] != '(') return false;
    int depth = 0;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '#') return false;
        if (c == '(') ++depth;
        if (c == ')' && --depth == 0) return i + 1 == s.size();
    }
    return false;
}

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw Error(msg);
}

void require_id(const std::string& s, const char* what) {
    require(is_identifier(s), std::string("invalid ") + what + " '" + s + "'");
}

void require_expr(const std::string& s) {
    require(is_expression(s), "invalid expression '" + s + "'");
}

const std::string kEmpty;
const Behaviour kNilB;
const ChoreographyBody kNilC;
constexpr std::size_t kNilHash = 0x51ed27;
constexpr std::size_t kDlockHash = 0xdead10c;

}  // namespace

// ---------------------------------------------------------------- Behaviour

Behaviour::Behaviour() = default;

namespace {
std::shared_ptr<BehaviourNode> bnode(Behaviour::Kind k, Name a, std::string b) {
    auto n = std::make_shared<BehaviourNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}
std::size_t bseal(BehaviourNode& n) {
    std::size_t h = hash_mix(static_cast<std::size_t>(n.kind) * 0x100000001b3ULL, hash_str(n.a));
    h = hash_mix(h, hash_str(n.b));
    std::size_t sz = 1;
    auto kid = [&](const Behaviour& c) {
        h = hash_mix(h, c.hash());
        sz += c.size();
    };
    switch (n.kind) {
        case Behaviour::Kind::Send:
        case Behaviour::Kind::Receive:
        case Behaviour::Kind::Select: kid(n.c0); break;
        case Behaviour::Kind::Cond: kid(n.c0); kid(n.c1); break;
        case Behaviour::Kind::Offer:
            for (auto& [l, b] : n.branches) {
                h = hash_mix(h, hash_str(l));
                kid(b);
            }
            break;
        default: break;
    }
    n.hash = h;
    n.size = sz;
    return h;
}
}  // namespace

Behaviour Behaviour::call(Name x) {
    require_id(x, "procedure name");
    auto n = bnode(Kind::Call, std::move(x), "");
    bseal(*n);
    return Behaviour(std::move(n));
}

Behaviour Behaviour::send(Name to, std::string e, Behaviour k) {
    require_id(to, "process name");
    require_expr(e);
    auto n = bnode(Kind::Send, std::move(to), std::move(e));
    n->c0 = std::move(k);
    bseal(*n);
    return Behaviour(std::move(n));
}

Behaviour Behaviour::receive(Name from, Name x, Behaviour k) {
    require_id(from, "process name");
    require_id(x, "variable");
    auto n = bnode(Kind::Receive, std::move(from), std::move(x));
    n->c0 = std::move(k);
    bseal(*n);
    return Behaviour(std::move(n));
}

Behaviour Behaviour::select(Name to, Name l, Behaviour k) {
    require_id(to, "process name");
    require_id(l, "label");
    auto n = bnode(Kind::Select, std::move(to), std::move(l));
    n->c0 = std::move(k);
    bseal(*n);
    return Behaviour(std::move(n));
}

Behaviour Behaviour::offer(Name from, Branches branches) {
    require_id(from, "process name");
    require(!branches.empty(), "offer from " + from + " has no branches");
    std::sort(branches.begin(), branches.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < branches.size(); ++i) {
        require_id(branches[i].first, "label");
        require(i == 0 || branches[i].first != branches[i - 1].first,
                "duplicate label '" + branches[i].first + "' in offer from " + from);
    }
    auto n = bnode(Kind::Offer, std::move(from), "");
    n->branches = std::move(branches);
    bseal(*n);
    return Behaviour(std::move(n));
}

Behaviour Behaviour::cond(std::string e, Behaviour t, Behaviour f) {
    require_expr(e);
    auto n = bnode(Kind::Cond, "", std::move(e));
    n->c0 = std::move(t);
    n->c1 = std::move(f);
    bseal(*n);
    return Behaviour(std::move(n));
}

Behaviour::Kind Behaviour::kind() const { return n_ ? n_->kind : Kind::Nil; }
const Name& Behaviour::peer() const { return n_ ? n_->a : kEmpty; }
const std::string& Behaviour::text() const { return n_ ? n_->b : kEmpty; }
const Behaviour& Behaviour::cont() const { return n_ ? n_->c0 : kNilB; }
const Behaviour& Behaviour::else_branch() const { return n_ ? n_->c1 : kNilB; }
const Behaviour::Branches& Behaviour::branches() const {
    static const Branches none;
    return n_ ? n_->branches : none;
}
std::size_t Behaviour::hash() const { return n_ ? n_->hash : kNilHash; }
std::size_t Behaviour::size() const { return n_ ? n_->size : 1; }

const Behaviour* Behaviour::branch(const Name& l) const {
    auto& bs = branches();
    auto it = std::lower_bound(bs.begin(), bs.end(), l,
                               [](const auto& b, const Name& k) { return b.first < k; });
    return it != bs.end() && it->first == l ? &it->second : nullptr;
}

bool Behaviour::operator==(const Behaviour& o) const {
    if (n_ == o.n_) return true;
    if (!n_ || !o.n_) return false;
    const auto& a = *n_;
    const auto& b = *o.n_;
    if (a.hash != b.hash || a.size != b.size || a.kind != b.kind || a.a != b.a || a.b != b.b)
        return false;
    switch (a.kind) {
        case Kind::Send:
        case Kind::Receive:
        case Kind::Select: return a.c0 == b.c0;
        case Kind::Cond: return a.c0 == b.c0 && a.c1 == b.c1;
        case Kind::Offer: return a.branches == b.branches;
        default: return true;
    }
}

bool behaviour_eq(const Behaviour& a, const Behaviour& b) { return a == b; }

// -------------------------------------------------------------- ProcessTerm

ProcessTerm::ProcessTerm() : ProcessTerm(ProcedureList{}, Behaviour()) {}

ProcessTerm::ProcessTerm(ProcedureList procs, Behaviour m) : main(std::move(m)) {
    for (auto& [x, b] : procs) require_id(x, "procedure name");
    std::stable_sort(procs.begin(), procs.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t h = 0x9ad;
    for (auto& [x, b] : procs) h = hash_mix(hash_mix(h, hash_str(x)), b.hash());
    procs_hash = h;
    procedures = std::make_shared<const ProcedureList>(std::move(procs));
}

const Behaviour* ProcessTerm::find(const Name& x) const {
    auto& ps = *procedures;
    auto it = std::lower_bound(ps.begin(), ps.end(), x,
                               [](const auto& p, const Name& k) { return p.first < k; });
    return it != ps.end() && it->first == x ? &it->second : nullptr;
}

std::size_t ProcessTerm::size() const {
    std::size_t s = main.size();
    for (auto& [x, b] : *procedures) s += b.size();
    return s;
}

bool ProcessTerm::operator==(const ProcessTerm& o) const {
    if (main != o.main) return false;
    if (procedures == o.procedures) return true;
    return procs_hash == o.procs_hash && *procedures == *o.procedures;
}

// ------------------------------------------------------------------ Network

Network::Network(std::vector<std::pair<Name, ProcessTerm>> procs) {
    require(!procs.empty(), "network has no processes");
    std::sort(procs.begin(), procs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    auto names = std::make_shared<std::vector<Name>>();
    for (std::size_t i = 0; i < procs.size(); ++i) {
        require_id(procs[i].first, "process name");
        require(i == 0 || procs[i].first != procs[i - 1].first,
                "duplicate process '" + procs[i].first + "'");
        names->push_back(procs[i].first);
        terms_.push_back(std::move(procs[i].second));
    }
    names_ = std::move(names);
}

std::optional<std::size_t> Network::index(const Name& p) const {
    auto it = std::lower_bound(names_->begin(), names_->end(), p);
    if (it == names_->end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - names_->begin());
}

const ProcessTerm* Network::find(const Name& p) const {
    auto i = index(p);
    return i ? &terms_[*i] : nullptr;
}

Network Network::with_main(std::size_t i, Behaviour m) const {
    Network n = *this;
    n.terms_[i].main = std::move(m);
    return n;
}

void Network::set_main(std::size_t i, Behaviour m) { terms_[i].main = std::move(m); }

std::size_t Network::hash() const {
    std::size_t h = terms_.size();
    for (auto& t : terms_) h = hash_mix(hash_mix(h, t.main.hash()), t.procs_hash);
    return h;
}

bool Network::operator==(const Network& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    if (names_ != o.names_ && *names_ != *o.names_) return false;
    return terms_ == o.terms_;
}

// -------------------------------------------------------------- ActionLabel

ActionLabel ActionLabel::com(Name p, std::string e, Name q, Name x) {
    ActionLabel a;
    a.kind = Kind::Com;
    a.p = std::move(p);
    a.q = std::move(q);
    a.e = std::move(e);
    a.x = std::move(x);
    return a;
}

ActionLabel ActionLabel::sel(Name p, Name q, Name l) {
    ActionLabel a;
    a.kind = Kind::Sel;
    a.p = std::move(p);
    a.q = std::move(q);
    a.l = std::move(l);
    return a;
}

ActionLabel ActionLabel::then_(Name p, std::string e) {
    ActionLabel a;
    a.kind = Kind::Then;
    a.p = std::move(p);
    a.e = std::move(e);
    return a;
}

ActionLabel ActionLabel::else_(Name p, std::string e) {
    ActionLabel a = then_(std::move(p), std::move(e));
    a.kind = Kind::Else;
    return a;
}

std::string ActionLabel::to_string() const {
    switch (kind) {
        case Kind::Com: return p + "." + e + " -> " + q + "." + x;
        case Kind::Sel: return p + " -> " + q + "[" + l + "]";
        case Kind::Then: return "then " + p + "." + e;
        case Kind::Else: return "else " + p + "." + e;
    }
    return "";
}

std::size_t ActionLabel::hash() const {
    std::size_t h = static_cast<std::size_t>(kind);
    for (auto* s : {&p, &q, &e, &x, &l}) h = hash_mix(h, hash_str(*s));
    return h;
}

std::set<Name> process_names_of(const ActionLabel& a) {
    if (a.is_interaction()) return {a.p, a.q};
    return {a.p};
}

// --------------------------------------------------------- ChoreographyBody

ChoreographyBody::ChoreographyBody() = default;

ChoreographyBody ChoreographyBody::dlock() {
    static const auto n = [] {
        auto m = std::make_shared<ChorNode>();
        m->kind = Kind::Dlock;
        m->hash = kDlockHash;
        return std::shared_ptr<const ChorNode>(m);
    }();
    return ChoreographyBody(n);
}

namespace {
std::size_t cseal(ChorNode& n) {
    std::size_t h = hash_mix(static_cast<std::size_t>(n.kind) * 0x100000001b3ULL + 7, hash_str(n.p));
    h = hash_mix(h, hash_str(n.q));
    h = hash_mix(h, hash_str(n.s1));
    h = hash_mix(h, hash_str(n.s2));
    std::size_t sz = 1;
    using K = ChoreographyBody::Kind;
    if (n.kind == K::Com || n.kind == K::Sel || n.kind == K::Cond) {
        h = hash_mix(h, n.c0.hash());
        sz += n.c0.size();
    }
    if (n.kind == K::Cond) {
        h = hash_mix(h, n.c1.hash());
        sz += n.c1.size();
    }
    n.hash = h;
    n.size = sz;
    return h;
}
}  // namespace

ChoreographyBody ChoreographyBody::call(Name x) {
    require_id(x, "procedure name");
    auto n = std::make_shared<ChorNode>();
    n->kind = Kind::Call;
    n->s1 = std::move(x);
    cseal(*n);
    return ChoreographyBody(std::move(n));
}

ChoreographyBody ChoreographyBody::com(Name p, std::string e, Name q, Name x, ChoreographyBody k) {
    require_id(p, "process name");
    require_id(q, "process name");
    require_expr(e);
    require_id(x, "variable");
    require(p != q, "self-communication at " + p);
    auto n = std::make_shared<ChorNode>();
    n->kind = Kind::Com;
    n->p = std::move(p);
    n->q = std::move(q);
    n->s1 = std::move(e);
    n->s2 = std::move(x);
    n->c0 = std::move(k);
    cseal(*n);
    return ChoreographyBody(std::move(n));
}

ChoreographyBody ChoreographyBody::sel(Name p, Name q, Name l, ChoreographyBody k) {
    require_id(p, "process name");
    require_id(q, "process name");
    require_id(l, "label");
    require(p != q, "self-selection at " + p);
    auto n = std::make_shared<ChorNode>();
    n->kind = Kind::Sel;
    n->p = std::move(p);
    n->q = std::move(q);
    n->s1 = std::move(l);
    n->c0 = std::move(k);
    cseal(*n);
    return ChoreographyBody(std::move(n));
}

ChoreographyBody ChoreographyBody::cond(Name p, std::string e, ChoreographyBody t,
                                        ChoreographyBody f) {
    require_id(p, "process name");
    require_expr(e);
    auto n = std::make_shared<ChorNode>();
    n->kind = Kind::Cond;
    n->p = std::move(p);
    n->s1 = std::move(e);
    n->c0 = std::move(t);
    n->c1 = std::move(f);
    cseal(*n);
    return ChoreographyBody(std::move(n));
}

ChoreographyBody ChoreographyBody::prefix(const ActionLabel& a, ChoreographyBody k) {
    if (a.kind == ActionLabel::Kind::Com) return com(a.p, a.e, a.q, a.x, std::move(k));
    if (a.kind == ActionLabel::Kind::Sel) return sel(a.p, a.q, a.l, std::move(k));
    throw Error("cannot prefix a conditional label");
}

ChoreographyBody::Kind ChoreographyBody::kind() const { return n_ ? n_->kind : Kind::Nil; }
const Name& ChoreographyBody::p() const { return n_ ? n_->p : kEmpty; }
const Name& ChoreographyBody::q() const { return n_ ? n_->q : kEmpty; }
const std::string& ChoreographyBody::expr() const { return n_ ? n_->s1 : kEmpty; }
const Name& ChoreographyBody::var() const { return n_ ? n_->s2 : kEmpty; }
const Name& ChoreographyBody::label() const { return expr(); }
const Name& ChoreographyBody::proc() const { return expr(); }
const ChoreographyBody& ChoreographyBody::cont() const { return n_ ? n_->c0 : kNilC; }
const ChoreographyBody& ChoreographyBody::else_branch() const { return n_ ? n_->c1 : kNilC; }
std::size_t ChoreographyBody::hash() const { return n_ ? n_->hash : kNilHash + 1; }
std::size_t ChoreographyBody::size() const { return n_ ? n_->size : 1; }

ActionLabel ChoreographyBody::action() const {
    if (kind() == Kind::Com) return ActionLabel::com(p(), expr(), q(), var());
    if (kind() == Kind::Sel) return ActionLabel::sel(p(), q(), label());
    throw Error("not an interaction");
}

bool ChoreographyBody::operator==(const ChoreographyBody& o) const {
    if (n_ == o.n_) return true;
    if (!n_ || !o.n_) return false;
    const auto& a = *n_;
    const auto& b = *o.n_;
    if (a.hash != b.hash || a.size != b.size || a.kind != b.kind || a.p != b.p || a.q != b.q ||
        a.s1 != b.s1 || a.s2 != b.s2)
        return false;
    switch (a.kind) {
        case Kind::Com:
        case Kind::Sel: return a.c0 == b.c0;
        case Kind::Cond: return a.c0 == b.c0 && a.c1 == b.c1;
        default: return true;
    }
}

// ------------------------------------------------------------- Choreography

Choreography::Choreography(ChorProcedureList procs, ChoreographyBody m)
    : procedures(std::move(procs)), main(std::move(m)) {
    for (auto& [x, b] : procedures) require_id(x, "procedure name");
    std::stable_sort(procedures.begin(), procedures.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
}

const ChoreographyBody* Choreography::find(const Name& x) const {
    auto it = std::lower_bound(procedures.begin(), procedures.end(), x,
                               [](const auto& p, const Name& k) { return p.first < k; });
    return it != procedures.end() && it->first == x ? &it->second : nullptr;
}

bool Choreography::operator==(const Choreography& o) const {
    return main == o.main && procedures == o.procedures;
}

namespace {
void collect(const ChoreographyBody& c, std::set<Name>& out) {
    using K = ChoreographyBody::Kind;
    switch (c.kind()) {
        case K::Com:
        case K::Sel:
            out.insert(c.p());
            out.insert(c.q());
            collect(c.cont(), out);
            break;
        case K::Cond:
            out.insert(c.p());
            collect(c.then_branch(), out);
            collect(c.else_branch(), out);
            break;
        default: break;
    }
}
}  // namespace

std::set<Name> process_names(const ChoreographyBody& c) {
    std::set<Name> out;
    collect(c, out);
    return out;
}

std::set<Name> process_names(const Choreography& c) {
    std::set<Name> out;
    collect(c.main, out);
    for (auto& [x, b] : c.procedures) collect(b, out);
    return out;
}

std::set<Name> process_names(const Program& p) {
    std::set<Name> out;
    for (auto& c : p.components) {
        auto s = process_names(c);
        out.insert(s.begin(), s.end());
    }
    return out;
}

}  // namespace chorex
