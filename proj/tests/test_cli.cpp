#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "chorex/cli.hpp"
#include "fixtures.hpp"

using namespace chorex;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream o, e;
    int c = run_cli(args, o, e);
    return {c, o.str(), e.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("chorex-" + tag + "-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& f) const { return (path / f).string(); }
};

int count(const std::string& s, const std::string& what) {
    int n = 0;
    for (auto at = s.find(what); at != std::string::npos; at = s.find(what, at + 1)) ++n;
    return n;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("extract exit codes") {
        auto ok = run({"extract", fixtures::corpus("n3.sp")});
        CHECK(ok.code == 0);
        CHECK(count(ok.out, "deadlock") == 2);
        CHECK(ok.err.find("warning: deadlock") != std::string::npos);
        auto strict = run({"extract", "--strict", fixtures::corpus("n3.sp")});
        CHECK(strict.code == 1);
        auto live = run({"extract", fixtures::corpus("livelock.sp")});
        CHECK(live.code == 1);
        CHECK(live.err.find("badloop") != std::string::npos);
        CHECK(run({"extract", fixtures::corpus("nothing-here.sp")}).code == 2);
        CHECK(run({"extract", fixtures::corpus("signon.cc")}).code == 2);
        CHECK(run({"extract", "--services", "zz", fixtures::corpus("n1.sp")}).code == 2);
        CHECK(run({"extract", "--strategy", "Bogus", fixtures::corpus("n1.sp")}).code == 2);
        CHECK(run({"extract", "--services", "r", fixtures::corpus("livelock.sp")}).code == 0);
    }

    TEST_CASE("parse errors carry the file name") {
        TempDir d("parse");
        {
            std::ofstream f(d / "bad.sp");
            f << "p { main { q!<e> } ";
        }
        auto r = run({"extract", d / "bad.sp"});
        CHECK(r.code == 2);
        CHECK(r.err.find("bad.sp:1:") != std::string::npos);
    }

    TEST_CASE("extract output is a parseable program") {
        auto r = run({"extract", fixtures::corpus("signon.sp")});
        REQUIRE(r.code == 0);
        CHECK(bisimilar(parse_program(r.out), fixtures::program("signon.cc")).verdict == Verdict::Yes);
    }

    TEST_CASE("stats and dot") {
        TempDir d("stats");
        auto r = run({"extract", "--no-timing", "--stats", d / "s.json", "--dot", d / "g.dot",
                      fixtures::corpus("signon.sp")});
        REQUIRE(r.code == 0);
        auto j = nlohmann::json::parse(slurp(d / "s.json"));
        CHECK(j["wallMillis"].get<double>() == 0.0);
        CHECK(j["components"].get<int>() == 1);
        CHECK(j["strategy"].get<std::string>() == "InteractionsFirst");
        auto live = j["nodesCreated"].get<int>() - j["nodesDeleted"].get<int>();
        std::string dot = slurp(d / "g.dot");
        CHECK(count(dot, "[label=") - count(dot, "-> c0n") == live);
    }

    TEST_CASE("project") {
        auto r = run({"project", fixtures::corpus("signon.cc")});
        REQUIRE(r.code == 0);
        CHECK(parse_network(r.out) == fixtures::network("signon.sp"));
        auto bad = run({"project", fixtures::corpus("loop_provider.cc")});
        CHECK(bad.code == 1);
        CHECK(bad.err.find("process r") != std::string::npos);
    }

    TEST_CASE("equiv") {
        auto y = run({"equiv", fixtures::corpus("unrolled.cc"), fixtures::corpus("rolled.cc")});
        CHECK(y.code == 0);
        CHECK(y.out.find("\"yes\"") != std::string::npos);
        auto n = run({"equiv", fixtures::corpus("n1.cc"), fixtures::corpus("n2.cc")});
        CHECK(n.code == 1);
        CHECK(n.out.find("witness") != std::string::npos);
        auto e = run({"equiv", "--budget", "1", fixtures::corpus("signon.cc"), fixtures::corpus("signon.cc")});
        CHECK(e.code == 3);
    }

    TEST_CASE("corpus pipeline") {
        TempDir d("pipe");
        auto g = run({"gen", "--out", d / "gen", "--set", "ifs", "--scale", "0.1", "--seed", "5"});
        REQUIRE_MESSAGE(g.code == 0, g.err);
        auto manifest = parse_manifest(slurp(d / "gen/manifest.json"));
        REQUIRE(manifest.size() == 4);
        CHECK(manifest[0].id == "ifs-s50-p6-i10-d0-0");
        for (auto& e : manifest) {
            CHECK(e.expected == "extractable");
            Choreography c = parse_choreography(slurp(d.path / "gen" / e.choreography));
            CHECK(conditional_count(c) >= e.ifs);
            CHECK(parse_network(slurp(d.path / "gen" / e.network)) == epp(c));
        }

        REQUIRE(run({"fuzz", "--in", d / "gen", "--out", d / "fz", "--grid", "0,1;1,0", "--seed", "2"}).code == 0);
        auto fm = parse_manifest(slurp(d / "fz/manifest.json"));
        CHECK(fm.size() == 8);
        CHECK(fm[1].id == manifest[0].id + "-d1s0");
        CHECK(fm[1].expected == "unknown");

        REQUIRE(run({"unroll", "--in", d / "gen", "--out", d / "un", "--seed", "2"}).code == 0);
        CHECK(parse_manifest(slurp(d / "un/manifest.json")).size() == 4);

        auto b = run({"bench", "--in", d / "gen", "--strategy", "I", "--strategy", "UR", "--no-timing"});
        REQUIRE(b.code == 0);
        std::istringstream lines(b.out);
        std::string line;
        std::getline(lines, line);
        CHECK(line == kCsvHeader);
        int rows = 0;
        while (std::getline(lines, line)) {
            ++rows;
            CHECK(line.substr(line.rfind(',') + 1) == "ok");
        }
        CHECK(rows == 8);
    }

    TEST_CASE("repeated runs are byte-identical") {
        TempDir d("det");
        for (auto tag : {"a", "b"})
            REQUIRE(run({"gen", "--out", d / tag, "--set", "procedures", "--scale", "0.1", "--seed", "9"}).code == 0);
        for (auto& e : fs::directory_iterator(d.path / "a"))
            CHECK(slurp(e.path()) == slurp(d.path / "b" / e.path().filename()));
        auto x = run({"bench", "--in", d / "a", "--no-timing", "--seed", "3"});
        auto y = run({"bench", "--in", d / "a", "--no-timing", "--seed", "3"});
        CHECK(x.out == y.out);
        auto r1 = run({"extract", "--strategy", "R", "--seed", "4", fixtures::corpus("starve.sp")});
        auto r2 = run({"extract", "--strategy", "R", "--seed", "4", fixtures::corpus("starve.sp")});
        CHECK(r1.out == r2.out);
    }

    TEST_CASE("help and bad usage") {
        CHECK(run({"--help"}).code == 0);
        CHECK(run({"frobnicate"}).code == 2);
        CHECK(run({}).code == 2);
    }
}
