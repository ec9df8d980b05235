// EndPoint Projection and the merge operator.
#pragma once

#include <map>
#include <set>
#include <string>

#include "chorex/core.hpp"

namespace chorex {

struct MergeError : Error {
    Name process;        // the process being projected, when known
    std::string where;   // location of the conditional whose branches clash
    std::string left, right;  // clashing head constructors
    MergeError(std::string left, std::string right);
    MergeError(const MergeError& inner, Name process, std::string where);
};

Behaviour merge(const Behaviour& a, const Behaviour& b);

// Processes occurring in each procedure or in any procedure it calls.
std::map<Name, std::set<Name>> procedure_involvement(const Choreography& c);

ProcessTerm project_process(const Choreography& c, const Name& r);
// One process per name in the choreography plus any declared extras.
Network epp(const Choreography& c, const std::set<Name>& declared = {});
Network epp(const Program& p, const std::set<Name>& declared = {});

}  // namespace chorex
