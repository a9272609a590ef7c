// Acceptance gate for the toolkit. Each criterion prints exactly one
// pass/FAIL line with its wall time so the suite output doubles as a
// release checklist. Budgets are pinned here on purpose.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "secat/cli.hpp"
#include "secat/ganea.hpp"
#include "secat/instances.hpp"
#include "secat/io.hpp"
#include "secat/ring.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

using namespace secat;

namespace {

std::string dataf(const std::string& name) { return std::string(SECAT_DATA_DIR) + "/" + name; }

struct Outcome {
    bool ok = false;
    std::string detail;
};

template <class Fn>
void criterion(int n, long budget_ms, Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail = std::string("exception: ") + e.what();
    }
    long ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    bool timely = ms <= budget_ms;
    std::printf("criterion %d: %s (%s; %ld ms, budget %ld ms)\n", n,
                o.ok && timely ? "pass" : "FAIL", o.detail.c_str(), ms, budget_ms);
    std::fflush(stdout);
    CHECK_MESSAGE(o.ok, o.detail);
    CHECK_MESSAGE(timely, "over the time budget");
}

// Runs a CLI command in process and returns its full text report.
std::pair<int, std::string> run_bounds(const std::string& path) {
    cli::CommandRequest req;
    req.command = "bounds";
    req.inputs = {path};
    std::ostringstream os;
    int code = cli::run_command(req, os);
    return {code, os.str()};
}

bool has(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

template <class Fn>
Outcome suite_outcome(Fn&& instance, int n, unsigned seed, std::string label) {
    auto bad = props::run_suite(instance, n, seed);
    if (bad) return {false, label + ": " + *bad};
    return {true, label + ": " + std::to_string(n) + " instances"};
}

}  // namespace

TEST_CASE("criterion 1: interval propagation recovers the Hopf values") {
    criterion(1, 1000, [] {
        auto [code, out] = run_bounds(dataf("hopf.facts"));
        bool ok = code == 0 && has(out, "result secat(h) = [1, 1]") &&
                  has(out, "result relcat(h) = [2, 2]");
        return Outcome{ok, "secat(h)=[1,1], relcat(h)=[2,2] from cat facts"};
    });
}

TEST_CASE("criterion 2: kernel cup-length pins the complexity of cp3 over s4") {
    criterion(2, 1000, [] {
        RingFile f = load_ring_file(dataf("cp3s4hom.ring"));
        const RingFile::HomBlock* hb = f.find_hom("delta1");
        int lb = hb ? secat_lower(hb->hom, 4) : -1;
        auto [code, out] = run_bounds(dataf("cp3s4.facts"));
        bool ok = lb == 2 && code == 0 && has(out, "result compl_map(iota) = [2, 2]");
        return Outcome{ok, "estimator gives 2, propagation closes the interval"};
    });
}

TEST_CASE("criterion 3: even spheres have complexity two at every strength") {
    criterion(3, 1000, [] {
        bool est = true;
        for (int n : {2, 4, 6}) {
            GradedRing r = builtin_ring("sphere(" + std::to_string(n) + ")");
            est = est && compl_lower(r, 4) == 2;
        }
        auto [code, out] = run_bounds(dataf("evensphere.facts"));
        bool ok = est && code == 0 && has(out, "result Compl(s2) = [2, 2]") &&
                  has(out, "result Compl(s4) = [2, 2]") && has(out, "result Compl(s6) = [2, 2]");
        return Outcome{ok, "zero-divisor bound 2 and Compl=[2,2] for s2, s4, s6"};
    });
}

TEST_CASE("criterion 4: categorical axioms hold on random instances") {
    criterion(4, 60000, [] {
        Outcome acc{true, "6 suites x 200 instances"};
        auto merge = [&acc](Outcome o) {
            if (!o.ok && acc.ok) acc = o;
        };
        merge(suite_outcome(props::whisker_uniqueness_instance, 200, 501, "whisker"));
        merge(suite_outcome(props::prism_pushout_instance, 200, 502, "prism pushout"));
        merge(suite_outcome(props::prism_pullback_instance, 200, 503, "prism pullback"));
        merge(suite_outcome(props::cube_axiom_instance, 200, 504, "cube"));
        merge(suite_outcome(props::join_base_change_instance, 200, 505, "join base change"));
        merge(suite_outcome(props::double_cofibre_instance, 200, 506, "double cofibre"));
        return acc;
    });
}

TEST_CASE("criterion 5: the stage minimum formula holds on random instances") {
    criterion(5, 120000, [] {
        return suite_outcome(props::min_formula_instance, 100, 601,
                             "relcat(alpha_i) = min(i, relcat(iota))");
    });
}

TEST_CASE("criterion 6: generated certificates validate at their claimed length") {
    criterion(6, 60000, [] {
        return suite_outcome(props::certificate_round_instance, 10, 701,
                             "pinch and suspension certificates");
    });
}

TEST_CASE("criterion 7: a cobase change can raise secat") {
    criterion(7, 10000, [] {
        ChainBackend bk;
        ChainFile f = load_chain_file(dataf("s1.chain"));
        ObjRef a = bk.add_object(f.complexes[0].second);
        ObjRef z = bk.zero_object();
        MapRef iota = bk.zero_map(a, z);
        int before = secat(bk, iota, 4).value;
        PushoutResult po = bk.h_pushout(iota, iota);
        int after = secat(bk, po.in_b, 4).value;
        bool ok = before == 0 && after == 1;
        return Outcome{ok,
                       "secat " + std::to_string(before) + " -> " + std::to_string(after) +
                           " under cobase change; the strict stage-one comparison is "
                           "acceptance_strict_alpha1"};
    });
}
