#include <doctest.h>

#include "fixtures.hpp"

using namespace chorex;

TEST_SUITE("equiv") {
    TEST_CASE("reflexive") {
        for (auto name : {"n1.cc", "n2.cc", "n3.cc", "signon.cc", "loop_provider.cc", "starve.cc"}) {
            Program p = fixtures::program(name);
            CHECK_MESSAGE(bisimilar(p, p).verdict == Verdict::Yes, name);
        }
    }

    TEST_CASE("inlined iteration") {
        Program a = fixtures::program("unrolled.cc");
        Program b = fixtures::program("rolled.cc");
        CHECK(can_simulate(a, b).verdict == Verdict::Yes);
        CHECK(can_simulate(b, a).verdict == Verdict::Yes);
    }

    TEST_CASE("unmatched action") {
        auto a = parse_choreography("main { p.e->q.x; stop }");
        auto b = parse_choreography("main { stop }");
        auto r = can_simulate(a, b);
        REQUIRE(r.verdict == Verdict::No);
        REQUIRE(r.witness);
        CHECK(r.witness->action == ActionLabel::com("p", "e", "q", "x"));
        CHECK(can_simulate(b, a).verdict == Verdict::Yes);
        CHECK(bisimilar(a, b).verdict == Verdict::No);
        CHECK(r.to_json().find("\"verdict\":\"no\"") != std::string::npos);
    }

    TEST_CASE("independent swaps are equivalent, dependent ones are not") {
        CHECK(bisimilar(fixtures::program("starve.cc"), fixtures::program("starve_swapped.cc")).verdict ==
              Verdict::Yes);
        auto a = parse_choreography("main { p.e->q.x; q.f->r.y }");
        auto b = parse_choreography("main { q.f->r.y; p.e->q.x }");
        CHECK(bisimilar(a, b).verdict == Verdict::No);
        auto c = parse_choreography("main { p.e->q.x; r.f->s.y }");
        auto d = parse_choreography("main { r.f->s.y; p.e->q.x }");
        CHECK(bisimilar(c, d).verdict == Verdict::Yes);
    }

    TEST_CASE("conditionals compare by branch") {
        auto a = parse_choreography("main { if p.e then p.a->q.x else p.b->q.x }");
        auto b = parse_choreography("main { if p.e then p.b->q.x else p.a->q.x }");
        CHECK(bisimilar(a, b).verdict == Verdict::No);
        auto c = parse_choreography("main { r.f->s.y; if p.e then p.a->q.x else p.b->q.x }");
        auto d = parse_choreography(
            "main { if p.e then (r.f->s.y; p.a->q.x) else (r.f->s.y; p.b->q.x) }");
        CHECK(bisimilar(c, d).verdict == Verdict::Yes);
    }

    TEST_CASE("stop and deadlock have the same transitions") {
        auto a = parse_choreography("main { p.e->q.x; deadlock }");
        auto b = parse_choreography("main { p.e->q.x }");
        CHECK(bisimilar(a, b).verdict == Verdict::Yes);
    }

    TEST_CASE("programs against single choreographies") {
        Program split = parse_program("def X { p.e->q.x; X } main { X } || def Y { r.f->s.y; Y } main { Y }");
        Program joint = parse_program("def X { p.e->q.x; r.f->s.y; X } main { X }");
        auto r = bisimilar(split, joint);
        CHECK(r.verdict == Verdict::Yes);
        CHECK(r.pairs_explored < 100);
    }

    TEST_CASE("budget") {
        auto c = parse_choreography("def X { p.a->q.x; p.b->q.x; p.c->q.x; X } main { X }");
        auto r = bisimilar(c, c, SimBudget{1, 1000});
        CHECK(r.verdict == Verdict::Exhausted);
        CHECK(r.to_json().find("exhausted") != std::string::npos);
        CHECK(bisimilar(c, c, SimBudget{10, 1000}).verdict == Verdict::Yes);
    }
}
