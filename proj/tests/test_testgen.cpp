#include <doctest.h>

#include <functional>

#include "fixtures.hpp"

using namespace chorex;

TEST_SUITE("testgen") {
    TEST_CASE("empty budget") {
        auto c = generate({0, 2, 0, 0, 1});
        CHECK(c.main.is_nil());
        CHECK(c.procedures.empty());
    }

    TEST_CASE("sizes and counts") {
        auto c = generate({50, 6, 0, 0, 2});
        CHECK(action_count(c) == 50);
        CHECK(conditional_count(c) == 0);
        auto d = generate({40, 4, 8, 3, 5});
        CHECK(action_count(d) == 40);
        CHECK(conditional_count(d) == 8);
        CHECK(d.procedures.size() == 3);
        CHECK(process_names(d).size() <= 4);
        CHECK_THROWS_AS(generate({3, 1, 0, 0, 0}), Error);
        CHECK_THROWS_AS(generate({3, 2, 4, 0, 0}), Error);
    }

    TEST_CASE("generation is deterministic") {
        GenParams p{30, 5, 4, 2, 99};
        CHECK(pretty(generate(p)) == pretty(generate(p)));
        GenParams q = p;
        q.seed = 100;
        CHECK(pretty(generate(p)) != pretty(generate(q)));
    }

    TEST_CASE("every procedure is reachable") {
        std::function<void(const ChoreographyBody&, std::set<Name>&)> calls = [&](const ChoreographyBody& b,
                                                                                 std::set<Name>& out) {
            switch (b.kind()) {
                case ChoreographyBody::Kind::Call: out.insert(b.proc()); break;
                case ChoreographyBody::Kind::Com:
                case ChoreographyBody::Kind::Sel: calls(b.cont(), out); break;
                case ChoreographyBody::Kind::Cond:
                    calls(b.then_branch(), out);
                    calls(b.else_branch(), out);
                    break;
                default: break;
            }
        };
        for (std::uint64_t s = 0; s < 30; ++s) {
            auto c = generate({20, 5, 8, 15, s});
            REQUIRE(c.procedures.size() == 15);
            std::set<Name> seen, todo;
            calls(c.main, todo);
            while (!todo.empty()) {
                Name x = *todo.begin();
                todo.erase(todo.begin());
                if (!seen.insert(x).second) continue;
                calls(*c.find(x), todo);
            }
            CHECK(seen.size() == 15);
        }
    }

    TEST_CASE("amend makes choreographies projectable") {
        auto c = parse_choreography("main { if p.e then (q.a->r.x) else (r.b->q.x) }");
        CHECK_THROWS_AS(epp(c), MergeError);
        auto a = amend(c);
        CHECK_NOTHROW(epp(a));
        CHECK(process_names(a) == process_names(c));
        auto ok = fixtures::program("signon.cc").components[0];
        CHECK(amend(ok) == ok);
        for (std::uint64_t s = 0; s < 50; ++s) {
            auto g = amend(generate(fixtures::roundtrip_params(s, 1)));
            CHECK_NOTHROW(epp(g));
        }
    }

    TEST_CASE("inefficiency injection") {
        auto c = parse_choreography("main { r.f->s.y; if p.e then p.a->q.x else p.b->q.x }");
        bool pushed = false;
        for (std::uint64_t s = 0; s < 8; ++s) {
            auto i = inject_inefficiency(c, s);
            CHECK(bisimilar(c, i).verdict == Verdict::Yes);
            pushed |= i.main.kind() == ChoreographyBody::Kind::Cond;
        }
        CHECK(pushed);
        auto plain = parse_choreography("main { p.e->q.x; q.f->r.y }");
        CHECK(inject_inefficiency(plain, 3) == plain);
        int grew = 0;
        for (std::uint64_t s = 0; s < 20; ++s) {
            auto g = amend(generate({30, 4, 6, 0, s}));
            auto i = inject_inefficiency(g, s);
            CHECK(bisimilar(g, i).verdict != Verdict::No);
            CHECK(conditional_count(i) == conditional_count(g));
            grew += action_count(i) > action_count(g);
        }
        CHECK(grew > 0);
    }

    TEST_CASE("fuzzing changes one process") {
        Network n = fixtures::network("signon.sp");
        Network f = fuzz(n, {1, 0, 4});
        int changed = 0;
        for (std::size_t i = 0; i < n.size(); ++i) changed += n.term(i) != f.term(i);
        CHECK(changed == 1);
        CHECK(pretty(fuzz(n, {2, 2, 9})) == pretty(fuzz(n, {2, 2, 9})));
    }

    TEST_CASE("deleting a receive breaks extraction") {
        Network n = parse_network("p { main { q!<e>; q?y } } | q { main { p?x; p!<f> } }");
        int broken = 0;
        for (std::uint64_t s = 0; s < 20; ++s) {
            ExtractOptions o;
            o.strict = true;
            broken += !extract(fuzz(n, {1, 0, s}), o).ok;
        }
        CHECK(broken == 20);
    }

    TEST_CASE("deleting a conditional keeps the then branch") {
        Network n = parse_network("p { main { if e then q!<1> else q!<2> } } | q { main { p?x } }");
        const std::set<std::string> allowed = {"q!<1>; stop", "if e then stop else (q!<2>; stop)",
                                               "if e then (q!<1>; stop) else stop"};
        bool kept_then = false;
        for (std::uint64_t s = 0; s < 40; ++s) {
            Network f = fuzz(n, {1, 0, s});
            if (f.find("p")->main == n.find("p")->main) continue;
            std::string m = pretty(f.find("p")->main);
            CHECK_MESSAGE(allowed.count(m), m);
            if (m == "q!<1>; stop") {
                kept_then = true;
                CHECK(extract(f).ok);
            }
        }
        CHECK(kept_then);
    }

    TEST_CASE("swapping") {
        Network n = parse_network("p { main { q!<1>; r!<2> } } | q { main { p?x } } | r { main { p?y } }");
        int swapped = 0;
        for (std::uint64_t s = 0; s < 20; ++s) {
            Network f = fuzz(n, {0, 1, s});
            const Behaviour& m = f.find("p")->main;
            if (m == n.find("p")->main) continue;
            CHECK((m == Behaviour::send("r", "2", Behaviour::send("q", "1", {})) ||
                   m == Behaviour::send("q", "1", Behaviour::nil())));
            swapped += m.peer() == "r";
        }
        CHECK(swapped > 0);
    }

    TEST_CASE("unrolling preserves behaviour") {
        Network n = epp(fixtures::program("rolled.cc"));
        int inlined = 0;
        for (std::uint64_t s = 0; s < 20; ++s) {
            Network u = unroll(n, s);
            inlined += u != n;
            auto a = extract(n);
            auto b = extract(u);
            REQUIRE(b.ok);
            CHECK(bisimilar(a.program, b.program).verdict == Verdict::Yes);
        }
        CHECK(inlined > 0);
        Network flat = fixtures::network("n1.sp");
        CHECK(unroll(flat, 1) == flat);
    }

    TEST_CASE("rotation moves part of the loop into main") {
        Network rolled = epp(fixtures::program("rolled.cc"));
        for (std::uint64_t s = 0; s < 20; ++s) {
            Network u = unroll(rolled, s);
            int rotated = 0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                const ProcessTerm& t = u.term(i);
                if (!t.find("Xr")) continue;
                ++rotated;
                CHECK_FALSE(t.find("X"));
                CHECK(t.main.kind() != Behaviour::Kind::Call);
                // Iterations of Xr are as long as the inlined loop, a multiple of two.
                CHECK((t.find("Xr")->size() - 1) % 2 == 0);
            }
            CHECK(rotated == 1);
        }
    }
}
