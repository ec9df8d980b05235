// Term languages shared by every module: stateful process behaviours,
// networks, choreography bodies, programs and abstract action labels.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace chorex {

using Name = std::string;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}
std::size_t hash_str(std::string_view s);

// [A-Za-z][A-Za-z0-9_]*
bool is_identifier(std::string_view s);
// Characters of the leading token of an expression: [A-Za-z0-9_'].
bool is_expression_char(char c);
// A nonempty token, optionally followed by one balanced parenthesised group,
// or a parenthesised group on its own. No whitespace or '#'.
bool is_expression(std::string_view s);

struct BehaviourNode;

// Immutable process behaviour. Copies share structure.
class Behaviour {
public:
    enum class Kind : std::uint8_t { Nil, Call, Send, Receive, Select, Offer, Cond };
    using Branches = std::vector<std::pair<Name, Behaviour>>;

    Behaviour();  // Nil

    static Behaviour nil() { return Behaviour(); }
    static Behaviour call(Name x);
    static Behaviour send(Name to, std::string e, Behaviour k);
    static Behaviour receive(Name from, Name x, Behaviour k);
    static Behaviour select(Name to, Name l, Behaviour k);
    // Branches are sorted by label; duplicate labels throw.
    static Behaviour offer(Name from, Branches branches);
    static Behaviour cond(std::string e, Behaviour t, Behaviour f);

    Kind kind() const;
    bool is_nil() const { return kind() == Kind::Nil; }
    // Send/Select: recipient. Receive/Offer: sender. Call: procedure name.
    const Name& peer() const;
    const Name& proc() const { return peer(); }
    // Send/Cond: expression. Receive: variable. Select: label.
    const std::string& text() const;
    const Behaviour& cont() const;
    const Behaviour& then_branch() const { return cont(); }
    const Behaviour& else_branch() const;
    const Branches& branches() const;
    const Behaviour* branch(const Name& l) const;

    std::size_t hash() const;
    std::size_t size() const;
    const void* id() const { return n_.get(); }

    bool operator==(const Behaviour& o) const;
    bool operator!=(const Behaviour& o) const { return !(*this == o); }

private:
    explicit Behaviour(std::shared_ptr<const BehaviourNode> n) : n_(std::move(n)) {}
    std::shared_ptr<const BehaviourNode> n_;
};

struct BehaviourNode {
    Behaviour::Kind kind = Behaviour::Kind::Nil;
    Name a;
    std::string b;
    Behaviour c0, c1;
    Behaviour::Branches branches;
    std::size_t hash = 0;
    std::size_t size = 1;
};

bool behaviour_eq(const Behaviour& a, const Behaviour& b);

using ProcedureList = std::vector<std::pair<Name, Behaviour>>;

// Procedures are kept name-sorted; duplicates are preserved so that the
// well-formedness check can report them.
struct ProcessTerm {
    std::shared_ptr<const ProcedureList> procedures;
    Behaviour main;
    std::size_t procs_hash = 0;

    ProcessTerm();
    ProcessTerm(ProcedureList procs, Behaviour main);
    ProcessTerm with_main(Behaviour m) const {
        ProcessTerm t = *this;
        t.main = std::move(m);
        return t;
    }

    const Behaviour* find(const Name& x) const;
    std::size_t size() const;  // main plus procedure bodies
    bool operator==(const ProcessTerm& o) const;
    bool operator!=(const ProcessTerm& o) const { return !(*this == o); }
};

// Map from process names to terms, stored name-sorted.
class Network {
public:
    Network() = default;
    explicit Network(std::vector<std::pair<Name, ProcessTerm>> procs);

    std::size_t size() const { return terms_.size(); }
    const Name& name(std::size_t i) const { return (*names_)[i]; }
    const std::vector<Name>& names() const { return *names_; }
    const ProcessTerm& term(std::size_t i) const { return terms_[i]; }
    std::optional<std::size_t> index(const Name& p) const;
    const ProcessTerm* find(const Name& p) const;

    Network with_main(std::size_t i, Behaviour m) const;
    void set_main(std::size_t i, Behaviour m);

    std::size_t hash() const;
    bool operator==(const Network& o) const;
    bool operator!=(const Network& o) const { return !(*this == o); }

private:
    std::shared_ptr<const std::vector<Name>> names_ = std::make_shared<std::vector<Name>>();
    std::vector<ProcessTerm> terms_;
};

struct ActionLabel {
    enum class Kind : std::uint8_t { Com, Sel, Then, Else };
    Kind kind = Kind::Com;
    Name p, q;        // q empty for Then/Else
    std::string e;    // Com, Then, Else
    Name x;           // Com: receiving variable
    Name l;           // Sel: label

    static ActionLabel com(Name p, std::string e, Name q, Name x);
    static ActionLabel sel(Name p, Name q, Name l);
    static ActionLabel then_(Name p, std::string e);
    static ActionLabel else_(Name p, std::string e);

    bool is_interaction() const { return kind == Kind::Com || kind == Kind::Sel; }
    bool involves(const Name& r) const { return p == r || (is_interaction() && q == r); }
    std::string to_string() const;
    std::size_t hash() const;
    auto tie() const { return std::tie(kind, p, q, e, x, l); }
    bool operator==(const ActionLabel& o) const { return tie() == o.tie(); }
    bool operator!=(const ActionLabel& o) const { return !(*this == o); }
    bool operator<(const ActionLabel& o) const { return tie() < o.tie(); }
};

std::set<Name> process_names_of(const ActionLabel& a);

struct ChorNode;

class ChoreographyBody {
public:
    enum class Kind : std::uint8_t { Nil, Dlock, Com, Sel, Cond, Call };

    ChoreographyBody();  // Nil

    static ChoreographyBody nil() { return ChoreographyBody(); }
    static ChoreographyBody dlock();
    static ChoreographyBody call(Name x);
    static ChoreographyBody com(Name p, std::string e, Name q, Name x, ChoreographyBody k);
    static ChoreographyBody sel(Name p, Name q, Name l, ChoreographyBody k);
    static ChoreographyBody cond(Name p, std::string e, ChoreographyBody t, ChoreographyBody f);
    // Prefix an interaction label (Com or Sel) to k.
    static ChoreographyBody prefix(const ActionLabel& a, ChoreographyBody k);

    Kind kind() const;
    bool is_nil() const { return kind() == Kind::Nil; }
    const Name& p() const;
    const Name& q() const;
    const std::string& expr() const;  // Com, Cond
    const Name& var() const;          // Com
    const Name& label() const;        // Sel
    const Name& proc() const;         // Call
    const ChoreographyBody& cont() const;
    const ChoreographyBody& then_branch() const { return cont(); }
    const ChoreographyBody& else_branch() const;
    // Com/Sel as an action label.
    ActionLabel action() const;

    std::size_t hash() const;
    std::size_t size() const;
    const void* id() const { return n_.get(); }

    bool operator==(const ChoreographyBody& o) const;
    bool operator!=(const ChoreographyBody& o) const { return !(*this == o); }

private:
    explicit ChoreographyBody(std::shared_ptr<const ChorNode> n) : n_(std::move(n)) {}
    std::shared_ptr<const ChorNode> n_;
};

struct ChorNode {
    ChoreographyBody::Kind kind = ChoreographyBody::Kind::Nil;
    Name p, q;
    std::string s1;  // expression, label or procedure name
    Name s2;         // variable
    ChoreographyBody c0, c1;
    std::size_t hash = 0;
    std::size_t size = 1;
};

using ChorProcedureList = std::vector<std::pair<Name, ChoreographyBody>>;

struct Choreography {
    ChorProcedureList procedures;  // name-sorted
    ChoreographyBody main;

    Choreography() = default;
    Choreography(ChorProcedureList procs, ChoreographyBody main);
    const ChoreographyBody* find(const Name& x) const;
    bool operator==(const Choreography& o) const;
    bool operator!=(const Choreography& o) const { return !(*this == o); }
};

struct Program {
    std::vector<Choreography> components;
    bool operator==(const Program& o) const { return components == o.components; }
};

// Process names occurring anywhere in a body, a choreography, or a program.
std::set<Name> process_names(const ChoreographyBody& c);
std::set<Name> process_names(const Choreography& c);
std::set<Name> process_names(const Program& p);

}  // namespace chorex
