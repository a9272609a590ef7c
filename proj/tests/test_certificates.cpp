#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "secat/instances.hpp"

#include <random>

using namespace secat;

TEST_CASE("certificate rounds validate and bound the invariant") {
    auto bad = props::run_suite(props::certificate_round_instance, 12, 301);
    REQUIRE_MESSAGE(!bad, bad.value_or(""));
}

TEST_CASE("cofibre projection certificate validates at length one") {
    ChainBackend H;
    std::mt19937 rng(302);
    ObjRef y = H.add_object(random_complex(rng, 0, 2, 2, 1).X);
    ObjRef a = H.add_object(random_complex(rng, 0, 2, 2, 1).X);
    MapRef f = H.add_map(y, a, random_chain_map(rng, H.complex_of(y), H.complex_of(a)));

    CofibreCertificate cc = cofibre_certificate(H, f);
    CertificateReport rel = validate_relcat_certificate(H, cc.cert, cc.iota);
    REQUIRE_MESSAGE(rel.accepted, rel.reason);
    CHECK(rel.length == 1);
    CertificateReport push = validate_pushcat_certificate(H, cc.cert, cc.iota);
    CHECK(push.accepted);

    InvariantResult rc = secat::relcat(H, cc.iota);
    REQUIRE_FALSE(rc.over_cap);
    CHECK(rc.value <= rel.length);
}

TEST_CASE("tampered certificates are rejected") {
    ChainBackend H;
    ObjRef x = H.add_object(sphere_complex(1));
    PinchCertificate pc = pinch_certificate(H, x);
    REQUIRE(validate_relcat_certificate(H, pc.cert, pc.p).accepted);

    SUBCASE("zero step witness between the same endpoints") {
        RelcatCertificate bad = pc.cert;
        bad.steps[0].glue = H.refl(H.compose(bad.steps[0].chi, bad.steps[0].tau));
        CertificateReport r = validate_relcat_certificate(H, bad, pc.p);
        CHECK_FALSE(r.accepted);
        CHECK(r.failed_stage == 0);
        CHECK(r.reason == "step square is not a pushout");
    }

    SUBCASE("missing relative data") {
        RelcatCertificate bad = pc.cert;
        bad.steps[0].sigma.reset();
        CertificateReport r = validate_relcat_certificate(H, bad, pc.p);
        CHECK_FALSE(r.accepted);
        CHECK(r.reason == "relative data is missing");
        CHECK(validate_pushcat_certificate(H, bad, pc.p).accepted);
    }

    SUBCASE("wrong map") {
        CertificateReport r = validate_relcat_certificate(H, pc.cert, H.identity(pc.SX));
        CHECK_FALSE(r.accepted);
    }

    SUBCASE("truncated tower") {
        SuspensionComplCertificate sc = suspension_compl_certificate(H, x);
        REQUIRE(validate_relcat_certificate(H, sc.cert, sc.diag).accepted);
        RelcatCertificate bad = sc.cert;
        bad.stages.pop_back();
        bad.iotas.pop_back();
        bad.steps.pop_back();
        CertificateReport r = validate_relcat_certificate(H, bad, sc.diag);
        CHECK_FALSE(r.accepted);
        CHECK(r.reason == "terminal stage is not the target of the map");
    }
}
