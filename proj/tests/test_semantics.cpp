#include <doctest.h>

#include <functional>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace chorex;

namespace {

std::vector<ActionLabel> labels(const std::vector<Step>& s) {
    std::vector<ActionLabel> out;
    for (auto& x : s) out.push_back(x.label);
    return out;
}

bool marked(const AnnotatedNetwork& an, const Name& p) { return an.marking.marked[*an.net.index(p)]; }

}  // namespace

TEST_SUITE("semantics") {
    TEST_CASE("independent pairs give two steps") {
        auto an = initial_network(fixtures::network("n1.sp"));
        auto s = enabled_steps(an);
        CHECK(labels(s) == std::vector<ActionLabel>{ActionLabel::com("p", "e", "q", "x"),
                                                    ActionLabel::com("r", "e'", "s", "y")});
    }

    TEST_CASE("a conditional yields then and else") {
        auto s = enabled_steps(initial_network(fixtures::network("n2.sp")));
        CHECK(labels(s) == std::vector<ActionLabel>{ActionLabel::then_("p", "e"), ActionLabel::else_("p", "e")});
        CHECK(s[0].successor.net.find("p")->main.kind() == Behaviour::Kind::Select);
    }

    TEST_CASE("selection needs an offered label") {
        auto n = parse_network("p { main { q+M } } | q { main { p&{L: stop, R: stop} } }");
        CHECK(enabled_steps(initial_network(n)).empty());
    }

    TEST_CASE("markings reset once every process has acted") {
        auto an = initial_network(fixtures::network("starve.sp"));
        CHECK(an.white());
        auto s1 = enabled_steps(an);
        REQUIRE(s1.size() == 2);
        auto& a1 = s1[0].successor;
        CHECK(marked(a1, "p"));
        CHECK(marked(a1, "q"));
        CHECK_FALSE(marked(a1, "r"));
        CHECK_FALSE(a1.white());
        auto s2 = enabled_steps(a1);
        REQUIRE(s2.size() == 2);
        // p again: p,q still marked, r,s not.
        CHECK(s2[0].successor == a1);
        // r and s act: reset.
        CHECK(s2[1].successor.white());
        CHECK(s2[1].successor == an);
    }

    TEST_CASE("unfolding happens only when a step needs it") {
        auto an = initial_network(fixtures::network("starve.sp"));
        CHECK(an.net.find("p")->main.kind() == Behaviour::Kind::Call);
        auto s = enabled_steps(an);
        // After p.e->q.x, p is back at its call and r never unfolded.
        CHECK(s[0].successor.net.find("p")->main.proc() == "X");
        CHECK(s[0].successor.net.find("r")->main.proc() == "Z");
    }

    TEST_CASE("services and terminated processes stay marked") {
        auto n = fixtures::network("loop_provider.sp");
        auto an = initial_network(n, {"r"});
        CHECK(marked(an, "r"));
        CHECK(an.white());
        CHECK_THROWS_AS(initial_network(n, {"nobody"}), Error);
        auto done = initial_network(parse_network("p { main { stop } } | q { main { stop } }"));
        CHECK(is_finished(done));
        CHECK(done.white());
    }

    TEST_CASE("choreography steps go past independent prefixes") {
        Choreography c = parse_choreography("main { p.e->q.x; r.f->s.y; p.g->q.z }");
        auto st = chor_enabled(c, c.main);
        REQUIRE(st.size() == 2);
        CHECK(st[1].label == ActionLabel::com("r", "f", "s", "y"));
        CHECK(pretty(st[1].residue) == "p.e->q.x; p.g->q.z; stop");
    }

    TEST_CASE("choreography steps through both branches of a conditional") {
        Choreography c = parse_choreography(
            "main { if p.e then (r.f->s.y; q.a->p.x) else (r.f->s.y; stop) }");
        auto st = chor_enabled(c, c.main);
        REQUIRE(st.size() == 3);
        CHECK(st[2].label == ActionLabel::com("r", "f", "s", "y"));
        CHECK(pretty(st[2].residue) == "if p.e then (q.a->p.x; stop) else stop");
    }

    TEST_CASE("choreography steps through recursion") {
        Choreography c = parse_choreography("def X { p.e->q.x; r.f->s.y; X } main { X }");
        auto st = chor_enabled(c, c.main);
        REQUIRE(st.size() == 2);
        auto st2 = chor_enabled(c, st[1].residue);
        // r.f->s.y again through the unfolded call, behind p.e->q.x.
        CHECK(st2.size() == 2);
    }

    TEST_CASE("choreography steps match the rewrite closure") {
        Rng rng(7);
        const std::vector<Name> ps = {"p", "q", "r", "s"};
        int next = 0;
        std::function<ChoreographyBody(int, int)> body = [&](int size, int procs) -> ChoreographyBody {
            if (size <= 0) {
                if (procs > 0 && uniform(rng, 3) == 0)
                    return ChoreographyBody::call("X" + std::to_string(uniform(rng, procs) + 1));
                return ChoreographyBody::nil();
            }
            auto a = uniform(rng, 4);
            auto b = (a + 1 + uniform(rng, 3)) % 4;
            switch (uniform(rng, 4)) {
                case 0: {
                    int t = static_cast<int>(uniform(rng, size));
                    // Same expression in both copies so that conditional swaps apply.
                    return ChoreographyBody::cond(ps[a], "c" + std::to_string(a), body(t, procs),
                                                  body(size - 1 - t, procs));
                }
                case 1: return ChoreographyBody::sel(ps[a], ps[b], "L", body(size - 1, procs));
                default:
                    return ChoreographyBody::com(ps[a], "e" + std::to_string(next++ % 3), ps[b], "x",
                                                 body(size - 1, procs));
            }
        };
        int compared = 0;
        for (int i = 0; i < 300; ++i) {
            int procs = static_cast<int>(uniform(rng, 2));
            ChorProcedureList defs;
            for (int k = 0; k < procs; ++k)
                defs.emplace_back("X" + std::to_string(k + 1),
                                  ChoreographyBody::prefix(ActionLabel::com("p", "e", "q", "x"),
                                                           body(static_cast<int>(uniform(rng, 3)), procs)));
            ChoreographyBody m = body(1 + static_cast<int>(uniform(rng, 5)), procs);
            if (m.size() > 12) continue;
            Choreography c(defs, m);
            std::set<ActionLabel> fast;
            for (auto& s : chor_enabled(c, m)) fast.insert(s.label);
            auto slow = oracle::rewrite_heads(c, m, 4);
            CHECK_MESSAGE(fast == slow, pretty(c));
            ++compared;
        }
        CHECK(compared > 200);
    }
}
