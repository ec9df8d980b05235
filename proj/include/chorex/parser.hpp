// Concrete syntax for networks (.sp), choreographies and programs (.cc).
#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "chorex/core.hpp"

namespace chorex {

struct SourceSpan {
    std::size_t line = 1;    // 1-based
    std::size_t column = 1;  // 1-based
    std::size_t offset = 0;  // byte offset
    std::size_t length = 0;
};

struct ParseError : Error {
    SourceSpan span;
    ParseError(const std::string& msg, SourceSpan s);
};

// Parse and run the well-formedness and guardedness checks.
Network parse_network(std::string_view text);
Choreography parse_choreography(std::string_view text);
Program parse_program(std::string_view text);

// Syntax only. Check violations are left for the caller.
Network parse_network_unchecked(std::string_view text);
Program parse_program_unchecked(std::string_view text);

std::string pretty(const Behaviour& b);
std::string pretty(const ProcessTerm& t);
std::string pretty(const Network& n);
std::string pretty(const ChoreographyBody& c);
std::string pretty(const Choreography& c);
std::string pretty(const Program& p);

}  // namespace chorex
