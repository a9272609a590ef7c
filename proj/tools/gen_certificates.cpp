// Writes the bundled pinch certificate and a tampered variant. The tamper
// swaps the step glue witness for the zero homotopy when that typechecks,
// which leaves every witness valid but breaks the pushout property of the
// step square; otherwise it re-points the certificate at the zero map so
// the terminal stage check fails.
#include "secat/certificates.hpp"
#include "secat/io.hpp"

#include <fstream>
#include <iostream>
#include <string>

using secat::ChainBackend;
using secat::GradedMap;

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : "data";

    ChainBackend bk;
    secat::ObjRef x = bk.add_object(secat::sphere_complex(0));
    secat::PinchCertificate pc = secat::pinch_certificate(bk, x);
    {
        std::ofstream out(dir + "/pinch.cert");
        secat::write_certificate_file(out, bk, pc.cert, pc.p, "relcat");
    }

    secat::RelcatCertificate bad = pc.cert;
    secat::CertStep& st = bad.steps.at(0);
    secat::MapRef lhs = bk.witness_lhs(st.glue);
    secat::MapRef rhs = bk.witness_rhs(st.glue);
    const secat::ChainComplex& src = bk.complex_of(bk.source(lhs));
    const secat::ChainComplex& tgt = bk.complex_of(bk.target(lhs));
    secat::MapRef target = pc.p;
    try {
        st.glue = bk.add_witness(lhs, rhs, GradedMap(src.dims(), tgt.dims(), 1));
        std::cout << "tamper: zero glue witness\n";
    } catch (const secat::HcatError&) {
        target = bk.zero_map(bk.source(pc.p), bk.target(pc.p));
        std::cout << "tamper: zero target map\n";
    }
    {
        std::ofstream out(dir + "/pinch_tampered.cert");
        secat::write_certificate_file(out, bk, bad, target, "relcat");
    }
    std::cout << "wrote " << dir << "/pinch.cert and " << dir << "/pinch_tampered.cert\n";
    return 0;
}
