// Abstract transitions of annotated networks and of choreographies.
#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <unordered_map>
#include <vector>

#include "chorex/core.hpp"

namespace chorex {

// Marking bits aligned with the network's (sorted) process order.
// Services and terminated processes are always marked.
struct Marking {
    std::vector<bool> marked;
    std::shared_ptr<const std::vector<bool>> services;

    bool is_service(std::size_t i) const { return services && (*services)[i]; }
    std::size_t hash() const;
    bool operator==(const Marking& o) const { return marked == o.marked; }
};

struct AnnotatedNetwork {
    Network net;
    Marking marking;

    // Every process that is neither a service nor terminated is unmarked.
    bool white() const;
    std::size_t hash() const { return hash_mix(net.hash(), marking.hash()); }
    bool operator==(const AnnotatedNetwork& o) const {
        return marking == o.marking && net == o.net;
    }
};

struct Step {
    ActionLabel label;
    AnnotatedNetwork successor;
};

// Follow bare procedure calls at the head of b. Stops at a call it cannot
// resolve or after |procedures|+1 unfoldings.
Behaviour unfold_head(const ProcessTerm& t, Behaviour b);
bool is_terminated(const ProcessTerm& t);
// Every process that is not a service is terminated.
bool is_finished(const AnnotatedNetwork& an);

AnnotatedNetwork initial_network(const Network& n, const std::set<Name>& services = {});
Marking next_marking(const AnnotatedNetwork& from, const Network& to, const ActionLabel& a);

// One step per enabled action, in canonical order: by acting process name,
// then Then before Else.
std::vector<Step> enabled_steps(const AnnotatedNetwork& an);

struct ChorStep {
    ActionLabel label;
    ChoreographyBody residue;
};

// Actions a choreography body can perform up to structural precongruence.
class ChorSemantics {
public:
    explicit ChorSemantics(const Choreography& c);
    std::vector<ChorStep> enabled(const ChoreographyBody& body) const;
    const Choreography& choreography() const { return c_; }

private:
    using Mask = std::vector<std::uint64_t>;
    struct Scan;
    Choreography c_;
    std::unordered_map<Name, std::size_t> index_;
};

std::vector<ChorStep> chor_enabled(const Choreography& c, const ChoreographyBody& body);

}  // namespace chorex
