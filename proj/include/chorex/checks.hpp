// Validation run before extraction: well-formedness and guardedness.
#pragma once

#include <string>
#include <vector>

#include "chorex/core.hpp"

namespace chorex {

struct Violation {
    std::string kind;  // self-communication | unresolved-call | duplicate-procedure | unguarded-call
    Name process;      // empty for choreography checks
    Name procedure;    // empty when the violation is in main
    std::string description;
};

struct CheckReport {
    bool ok = true;
    std::vector<Violation> violations;
    // Conditions that cannot be decided here, listed rather than dropped.
    std::vector<std::string> skipped;

    void add(Violation v) {
        ok = false;
        violations.push_back(std::move(v));
    }
    void merge(const CheckReport& o);
    std::string to_json() const;
    std::string summary() const;
};

CheckReport check_well_formed(const Network& n);
CheckReport check_guardedness(const Network& n);
// Duplicate or unresolved procedures and procedure bodies that are bare calls.
CheckReport check_choreography(const Choreography& c);

}  // namespace chorex
