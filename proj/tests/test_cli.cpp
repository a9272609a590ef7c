#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "secat/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using secat::cli::run_cli;

namespace {

std::string dataf(const std::string& name) { return std::string(SECAT_DATA_DIR) + "/" + name; }

int run(std::vector<std::string> args, std::string& out) {
    std::ostringstream os, es;
    int code = run_cli(args, os, es);
    out = os.str() + es.str();
    return code;
}

bool has(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("bounds reaches the classical Hopf values") {
    std::string out;
    int code = run({"bounds", dataf("hopf.facts")}, out);
    CHECK(code == 0);
    CHECK(has(out, "status OK"));
    CHECK(has(out, "result secat(h) = [1, 1]"));
    CHECK(has(out, "result relcat(h) = [2, 2]"));
    CHECK(has(out, "trace secat(h)"));  // queried keys always carry their derivation
}

TEST_CASE("bounds with ablated rules reports the honest weaker intervals") {
    std::string out;
    int code = run({"bounds", dataf("hopf.facts"), "--disable-rule", "R8", "--disable-rule", "R4"},
                   out);
    CHECK(code == 0);
    CHECK(has(out, "note rule R8 disabled"));
    CHECK(has(out, "note rule R4 disabled"));
    CHECK(has(out, "result secat(h) = [0, 1]"));
    CHECK(has(out, "result relcat(h) = [0, 2]"));
}

TEST_CASE("chain computes exact small invariants") {
    std::string out;
    CHECK(run({"chain", "secat", dataf("id_s2.chainmap")}, out) == 0);
    CHECK(has(out, "result secat(id) = 0"));
    CHECK(run({"chain", "cat", dataf("s2.chain")}, out) == 0);
    CHECK(has(out, "result cat(s2) = 1"));
    CHECK(run({"chain", "relcat", dataf("id_s2.chainmap"), "--trace"}, out) == 0);
    CHECK(has(out, "result relcat(id) = 0"));
    CHECK(has(out, "trace relcat(id)"));
}

TEST_CASE("chain distinguishes OVER_CAP from errors") {
    std::string out;
    int code = run({"chain", "cat", dataf("s2.chain"), "--cap", "0"}, out);
    CHECK(code == 0);
    CHECK(has(out, "status OVER_CAP"));
    CHECK(has(out, "result cat(s2) = OVER_CAP"));
}

TEST_CASE("certify accepts the bundled pinch certificate and rejects the tampered one") {
    std::string out;
    CHECK(run({"certify", "relcat", dataf("pinch.cert")}, out) == 0);
    CHECK(has(out, "result accepted = true"));
    CHECK(has(out, "result length = 1"));

    int code = run({"certify", "relcat", dataf("pinch_tampered.cert")}, out);
    CHECK(code == 1);
    CHECK(has(out, "status REJECT"));
    CHECK(has(out, "result accepted = false"));
    CHECK(has(out, "step square is not a pushout"));
    CHECK(has(out, "result stage = 0"));
}

TEST_CASE("certify suspension builds and validates a length two certificate") {
    std::string out;
    int code = run({"certify", "suspension", dataf("s2.chain")}, out);
    CHECK(code == 0);
    CHECK(has(out, "result accepted = true"));
    CHECK(has(out, "result length = 2"));
    CHECK(has(out, "diagonal of the suspension"));
}

TEST_CASE("estimate reproduces the cohomological lower bounds") {
    std::string out;
    CHECK(run({"estimate", "secat-of-hom", dataf("cp3s4hom.ring"), "--hom", "delta1"}, out) == 0);
    CHECK(has(out, "hom delta1: s4xcp3 -> cp3"));
    CHECK(has(out, "result lower_bound = 2"));
    CHECK(has(out, "fact secat(delta1) = [2, inf] source=estimator"));

    CHECK(run({"estimate", "compl", "builtin:sphere(2)"}, out) == 0);
    CHECK(has(out, "result lower_bound = 2"));
    CHECK(has(out, "fact compl(sphere_2) = [2, inf] source=estimator"));

    CHECK(run({"estimate", "cat", "builtin:cp(2)"}, out) == 0);
    CHECK(has(out, "result lower_bound = 2"));
    CHECK(has(out, "fact cat(cp_2) = [2, inf] source=estimator"));

    CHECK(run({"estimate", "compl", "builtin:sphere(2)", "--emit-key", "compl(s2)"}, out) == 0);
    CHECK(has(out, "fact compl(s2) = [2, inf] source=estimator"));
}

TEST_CASE("examples lists and runs the bundled suite") {
    std::string out;
    CHECK(run({"examples", "--list"}, out) == 0);
    std::vector<std::string> ids = secat::cli::example_ids();
    CHECK(ids.size() == 19);
    for (const auto& id : ids) CHECK(has(out, "result " + id + " = available"));

    CHECK(run({"examples"}, out) == 0);
    CHECK(has(out, "result passed = 19"));
    CHECK(has(out, "result failed = 0"));
    CHECK(count_of(out, " FAIL") == 0);
}

TEST_CASE("examples under ablation fails only where the removed rules mattered") {
    std::string out;
    int code =
        run({"examples", "--disable-rule", "R8", "--disable-rule", "R4"}, out);
    CHECK(code == 1);
    CHECK(has(out, "status FAIL"));
    CHECK(has(out, "item hopf-bounds FAIL"));
    CHECK(has(out, "result failed = 1"));
}

TEST_CASE("structured reports are deterministic and carry no timing") {
    std::string a, b;
    CHECK(run({"bounds", dataf("hopf.facts"), "--format", "structured", "--trace"}, a) == 0);
    CHECK(run({"bounds", dataf("hopf.facts"), "--format", "structured", "--trace"}, b) == 0);
    CHECK(a == b);
    CHECK(has(a, "\"format\": \"secat-report/1\""));
    CHECK_FALSE(has(a, "time"));
}

TEST_CASE("error kinds map to exit codes") {
    std::string out;
    SUBCASE("missing file is a parse error") {
        CHECK(run({"bounds", "/nonexistent/x.facts"}, out) == 2);
        CHECK(has(out, "error PARSE_ERROR"));
    }
    SUBCASE("contradictory facts are a mathematical failure, not an error") {
        auto tmp = std::filesystem::temp_directory_path() / "secat_cli_inconsistent.facts";
        {
            std::ofstream f(tmp);
            f << "facts 1\nobject x\n"
              << "fact cat(x) = [2, 2] source=a\n"
              << "fact cat(x) = [3, 3] source=b\n";
        }
        CHECK(run({"bounds", tmp.string()}, out) == 1);
        CHECK(has(out, "status INCONSISTENT"));
        std::filesystem::remove(tmp);
    }
    SUBCASE("unknown rule ids are rejected") {
        CHECK(run({"bounds", dataf("hopf.facts"), "--disable-rule", "R99"}, out) == 2);
        CHECK(has(out, "error INVALID_FACTS"));
    }
    SUBCASE("wrong file kind for a subject is a usage error") {
        CHECK(run({"chain", "secat", dataf("s2.chain")}, out) == 2);
        CHECK(has(out, "error USAGE"));
    }
    SUBCASE("command line misuse") {
        CHECK(run({}, out) == 2);
        CHECK(run({"chain", "wrong", dataf("s2.chain")}, out) == 2);
        CHECK(run({"--help"}, out) == 0);
        CHECK(has(out, "sectional category toolkit"));
    }
}
