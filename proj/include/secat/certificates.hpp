// Explicit stage-by-stage decompositions certifying upper bounds for the
// strong sectional invariants, together with validators that re-check every
// square and witness. A certificate is data, not a proof script: validation
// never solves for anything, it only verifies what is presented.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "secat/chain_backend.hpp"
#include "secat/ganea.hpp"
#include "secat/hcat.hpp"

namespace secat {

// One attachment step X_i -> X_{i+1}: the next stage is presented as the
// pushout of rho and tau over Z, with glue witnessing chi tau => iota_{i+1}
// rho and coh witnessing chi iota_i => iota_{i+1}. The relative data sigma
// splits rho compatibly with the structure maps.
struct CertStep {
    ObjRef Z;
    MapRef rho;        // Z -> A
    MapRef tau;        // Z -> X_i
    MapRef chi;        // X_i -> X_{i+1}
    WitnessRef glue;   // chi tau => iota_{i+1} rho
    WitnessRef coh;    // chi iota_i => iota_{i+1}
    std::optional<MapRef> sigma;          // A -> Z
    std::optional<WitnessRef> rho_sigma;  // rho sigma => id_A
    std::optional<WitnessRef> tau_sigma;  // tau sigma => iota_i
};

struct PushcatCertificate {
    ObjRef A;
    std::vector<ObjRef> stages;  // X_0 .. X_n
    std::vector<MapRef> iotas;   // iota_i: A -> X_i
    MapRef lambda;               // X_0 -> A, inverse to iota_0
    WitnessRef lambda_left;      // lambda iota_0 => id_A
    WitnessRef lambda_right;     // iota_0 lambda => id_{X_0}
    std::vector<CertStep> steps;

    int length() const { return static_cast<int>(steps.size()); }
};

// Same shape; validation additionally demands the sigma data on every step.
struct RelcatCertificate : PushcatCertificate {};

struct CertificateReport {
    bool accepted = false;
    int length = -1;
    int failed_stage = -1;  // -1 when the failure is not tied to one step
    std::string reason;

    static CertificateReport ok(int length) {
        CertificateReport r;
        r.accepted = true;
        r.length = length;
        return r;
    }
    static CertificateReport reject(int stage, std::string reason) {
        CertificateReport r;
        r.failed_stage = stage;
        r.reason = std::move(reason);
        return r;
    }
};

// Checks the certificate against the given map: endpoints, the inverse pair
// for lambda, every step square (commutation and the pushout property), the
// coherence witnesses, and that the terminal stage map is the given map. The
// first failing check is reported.
CertificateReport validate_pushcat_certificate(HomotopyCategory& hc,
                                               const PushcatCertificate& cert,
                                               MapRef iota);
CertificateReport validate_relcat_certificate(HomotopyCategory& hc,
                                              const RelcatCertificate& cert,
                                              MapRef iota);

// Builders. These produce certificates whose witnesses are written down
// explicitly from the defining pushouts, which requires backend access; the
// validators above only ever use the category interface.

// Length-one certificate for the projection of target(f) onto the cofibre
// of f.
struct CofibreCertificate {
    RelcatCertificate cert;
    PushoutResult cone;  // pushout of f against the point
    MapRef iota;         // target(f) -> cofibre, the certified map
};
CofibreCertificate cofibre_certificate(ChainBackend& bk, MapRef f);

// Length-one certificate for the pinch map from a suspension into the first
// stage of the fat-wedge tower of its product square. The step witness is the
// degree-one suspension coordinate; with the zero witness in its place the
// step square is not a pushout.
struct PinchCertificate {
    RelcatCertificate cert;
    SuspensionResult susp;  // of x
    ObjRef SX;
    JoinResult wedge;       // join of the two axis inclusions
    ObjRef T1;
    ProductResult x2;       // SX x SX
    MapRef p;               // SX -> T1, the certified map
    MapRef t1;              // T1 -> SX x SX
};
PinchCertificate pinch_certificate(ChainBackend& bk, ObjRef x);

// Length-two certificate for the diagonal of a suspension: the pinch step
// followed by attaching along the fibre of t1, which has the homotopy type of
// the join of x with itself over the point.
struct SuspensionComplCertificate {
    RelcatCertificate cert;
    PinchCertificate pinch;
    MapRef diag;        // SX -> SX x SX, the certified map
    ObjRef fibre_obj;   // fibre of t1
    ObjRef join_obj;    // x joined with itself over the point
};
SuspensionComplCertificate suspension_compl_certificate(ChainBackend& bk, ObjRef x);

}  // namespace secat
