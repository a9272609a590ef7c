#include "secat/certificates.hpp"

#include <utility>

namespace secat {

namespace {

bool witness_matches(HomotopyCategory& hc, WitnessRef w, MapRef lhs, MapRef rhs) {
    return hc.verify(w) && hc.strict_equal(hc.witness_lhs(w), lhs) &&
           hc.strict_equal(hc.witness_rhs(w), rhs);
}

CertificateReport validate_common(HomotopyCategory& hc, const PushcatCertificate& cert,
                                  MapRef iota, bool relative) {
    const int n = cert.length();
    if (cert.stages.empty() || cert.iotas.size() != cert.stages.size() ||
        cert.steps.size() + 1 != cert.stages.size())
        return CertificateReport::reject(-1, "stage, map and step counts disagree");
    if (cert.A != hc.source(iota))
        return CertificateReport::reject(-1, "certificate domain is not the domain of the map");
    for (std::size_t i = 0; i < cert.iotas.size(); ++i) {
        if (hc.source(cert.iotas[i]) != cert.A ||
            hc.target(cert.iotas[i]) != cert.stages[i])
            return CertificateReport::reject(static_cast<int>(i),
                                             "stage map endpoints are wrong");
    }
    if (hc.source(cert.lambda) != cert.stages[0] || hc.target(cert.lambda) != cert.A)
        return CertificateReport::reject(0, "lambda endpoints are wrong");
    if (!witness_matches(hc, cert.lambda_left, hc.compose(cert.lambda, cert.iotas[0]),
                         hc.identity(cert.A)))
        return CertificateReport::reject(0, "lambda is not a left inverse of the base map");
    if (!witness_matches(hc, cert.lambda_right, hc.compose(cert.iotas[0], cert.lambda),
                         hc.identity(cert.stages[0])))
        return CertificateReport::reject(0, "lambda is not a right inverse of the base map");

    for (int i = 0; i < n; ++i) {
        const CertStep& st = cert.steps[static_cast<std::size_t>(i)];
        if (hc.source(st.rho) != st.Z || hc.target(st.rho) != cert.A)
            return CertificateReport::reject(i, "rho endpoints are wrong");
        if (hc.source(st.tau) != st.Z || hc.target(st.tau) != cert.stages[i])
            return CertificateReport::reject(i, "tau endpoints are wrong");
        if (hc.source(st.chi) != cert.stages[i] || hc.target(st.chi) != cert.stages[i + 1])
            return CertificateReport::reject(i, "chi endpoints are wrong");
        if (!witness_matches(hc, st.coh, hc.compose(st.chi, cert.iotas[i]),
                             cert.iotas[i + 1]))
            return CertificateReport::reject(i, "chi does not carry the stage map forward");
        HSquare sq{st.rho, st.tau, st.chi, cert.iotas[i + 1], st.glue};
        if (!hc.square_commutes(sq))
            return CertificateReport::reject(i, "step square does not commute");
        if (!hc.is_h_pushout_square(sq))
            return CertificateReport::reject(i, "step square is not a pushout");
        if (relative) {
            if (!st.sigma || !st.rho_sigma || !st.tau_sigma)
                return CertificateReport::reject(i, "relative data is missing");
            if (hc.source(*st.sigma) != cert.A || hc.target(*st.sigma) != st.Z)
                return CertificateReport::reject(i, "sigma endpoints are wrong");
            if (!witness_matches(hc, *st.rho_sigma, hc.compose(st.rho, *st.sigma),
                                 hc.identity(cert.A)))
                return CertificateReport::reject(i, "sigma does not split rho");
            if (!witness_matches(hc, *st.tau_sigma, hc.compose(st.tau, *st.sigma),
                                 cert.iotas[i]))
                return CertificateReport::reject(i,
                                                 "sigma is not compatible with the stage map");
        }
    }
    if (cert.stages.back() != hc.target(iota))
        return CertificateReport::reject(n, "terminal stage is not the target of the map");
    if (!hc.is_homotopic(cert.iotas.back(), iota))
        return CertificateReport::reject(n, "terminal stage map differs from the given map");
    return CertificateReport::ok(n);
}

WitnessRef strict_witness(ChainBackend& bk, MapRef lhs, MapRef rhs, const char* what) {
    auto w = bk.homotopy(lhs, rhs);
    if (!w) throw HcatError(std::string("builder homotopy missing: ") + what);
    return *w;
}

// All builders start from the identity presentation of the domain.
void attach_identity_base(ChainBackend& bk, PushcatCertificate& cert, ObjRef a) {
    cert.A = a;
    cert.stages.push_back(a);
    cert.iotas.push_back(bk.identity(a));
    cert.lambda = bk.identity(a);
    cert.lambda_left = strict_witness(bk, bk.compose(cert.lambda, cert.iotas[0]),
                                      bk.identity(a), "lambda left");
    cert.lambda_right = strict_witness(bk, bk.compose(cert.iotas[0], cert.lambda),
                                       bk.identity(a), "lambda right");
}

}  // namespace

CertificateReport validate_pushcat_certificate(HomotopyCategory& hc,
                                               const PushcatCertificate& cert,
                                               MapRef iota) {
    return validate_common(hc, cert, iota, false);
}

CertificateReport validate_relcat_certificate(HomotopyCategory& hc,
                                              const RelcatCertificate& cert, MapRef iota) {
    return validate_common(hc, cert, iota, true);
}

CofibreCertificate cofibre_certificate(ChainBackend& bk, MapRef f) {
    CofibreCertificate out;
    ObjRef y = bk.source(f);
    ObjRef a = bk.target(f);
    out.cone = bk.h_pushout(f, bk.zero_map(y, bk.zero_object()));
    out.iota = out.cone.in_a;

    RelcatCertificate& c = out.cert;
    attach_identity_base(bk, c, a);
    c.stages.push_back(out.cone.apex);
    c.iotas.push_back(out.iota);

    // The target is also the pushout of (id, f) and the first projection over
    // the sum of the domain and the source of f; the glue restricts the cone
    // witness along the second projection.
    ProductResult za = bk.product(a, y);
    CertStep st;
    st.Z = za.obj;
    st.rho = bk.add_map(za.obj, a,
                        bk.graded(za.pr1) + compose(bk.graded(f), bk.graded(za.pr2)));
    st.tau = za.pr1;
    st.chi = out.iota;
    GradedMap s = compose(bk.witness_graded(out.cone.glue), bk.graded(za.pr2));
    st.glue = bk.add_witness(bk.compose(st.chi, st.tau), bk.compose(c.iotas[1], st.rho), s);
    st.coh = strict_witness(bk, bk.compose(st.chi, c.iotas[0]), c.iotas[1],
                            "cofibre coherence");
    st.sigma = bk.tuple(za, bk.identity(a), bk.zero_map(a, y));
    st.rho_sigma =
        strict_witness(bk, bk.compose(st.rho, *st.sigma), bk.identity(a), "rho split");
    st.tau_sigma =
        strict_witness(bk, bk.compose(st.tau, *st.sigma), c.iotas[0], "tau split");
    c.steps.push_back(std::move(st));
    return out;
}

PinchCertificate pinch_certificate(ChainBackend& bk, ObjRef x) {
    PinchCertificate out;
    out.susp = suspend(bk, x);
    out.SX = out.susp.obj;
    out.x2 = bk.product(out.SX, out.SX);
    MapRef i1 = bk.tuple(out.x2, bk.identity(out.SX), bk.zero_map(out.SX, out.SX));
    MapRef i2 = bk.tuple(out.x2, bk.zero_map(out.SX, out.SX), bk.identity(out.SX));
    out.wedge = join(bk, i1, i2);
    out.T1 = out.wedge.obj;
    out.t1 = out.wedge.j;
    // Fold of the two leg inclusions: t1 p is the diagonal on the nose.
    out.p = bk.add_map(out.SX, out.T1,
                       bk.graded(out.wedge.pushout.in_a) +
                           bk.graded(out.wedge.pushout.in_b));

    RelcatCertificate& c = out.cert;
    attach_identity_base(bk, c, out.SX);
    c.stages.push_back(out.T1);
    c.iotas.push_back(out.p);

    // Both legs of the step span are the first projection; the content of the
    // step sits entirely in the glue, which pushes the suspension coordinate
    // of the second factor into the second leg of the wedge. The zero witness
    // between the same endpoints does not give a pushout square.
    ProductResult zp = bk.product(out.SX, x);
    CertStep st;
    st.Z = zp.obj;
    st.rho = zp.pr1;
    st.tau = zp.pr1;
    st.chi = out.p;
    GradedMap coord =
        compose(bk.graded(out.wedge.pushout.in_b),
                compose(bk.witness_graded(out.susp.coord), bk.graded(zp.pr2)));
    st.glue =
        bk.add_witness(bk.compose(st.chi, st.tau), bk.compose(c.iotas[1], st.rho), coord);
    st.coh = strict_witness(bk, bk.compose(st.chi, c.iotas[0]), c.iotas[1],
                            "pinch coherence");
    st.sigma = bk.tuple(zp, bk.identity(out.SX), bk.zero_map(out.SX, x));
    st.rho_sigma =
        strict_witness(bk, bk.compose(st.rho, *st.sigma), bk.identity(out.SX), "rho split");
    st.tau_sigma =
        strict_witness(bk, bk.compose(st.tau, *st.sigma), c.iotas[0], "tau split");
    c.steps.push_back(std::move(st));
    return out;
}

SuspensionComplCertificate suspension_compl_certificate(ChainBackend& bk, ObjRef x) {
    SuspensionComplCertificate out;
    out.pinch = pinch_certificate(bk, x);
    ObjRef sx = out.pinch.SX;
    MapRef t1 = out.pinch.t1;
    out.diag = bk.tuple(out.pinch.x2, bk.identity(sx), bk.identity(sx));

    FibreResult fib = fibre(bk, t1);
    out.fibre_obj = fib.obj;
    MapRef u = fib.incl;
    JoinResult xjx = join(bk, bk.zero_map(x, bk.zero_object()),
                          bk.zero_map(x, bk.zero_object()));
    out.join_obj = xjx.obj;
    if (!bk.same_homotopy_type(out.fibre_obj, out.join_obj))
        throw HcatError("fibre of t1 does not match the self join of the input");

    RelcatCertificate& c = out.cert;
    c = out.pinch.cert;
    c.stages.push_back(out.pinch.x2.obj);
    c.iotas.push_back(out.diag);

    // Second step: attach along the fibre of t1, pairing the fold with the
    // fibre inclusion; the glue restricts the fibre glue to the second factor.
    ProductResult zp = bk.product(sx, out.fibre_obj);
    CertStep st;
    st.Z = zp.obj;
    st.rho = zp.pr1;
    st.tau = bk.add_map(zp.obj, out.pinch.T1,
                        compose(bk.graded(out.pinch.p), bk.graded(zp.pr1)) +
                            compose(bk.graded(u), bk.graded(zp.pr2)));
    st.chi = t1;
    GradedMap w1 =
        -compose(bk.witness_graded(fib.pullback.glue), bk.graded(zp.pr2));
    st.glue =
        bk.add_witness(bk.compose(st.chi, st.tau), bk.compose(out.diag, st.rho), w1);
    st.coh = strict_witness(bk, bk.compose(st.chi, c.iotas[1]), c.iotas[2],
                            "diagonal coherence");
    st.sigma = bk.tuple(zp, bk.identity(sx), bk.zero_map(sx, out.fibre_obj));
    st.rho_sigma =
        strict_witness(bk, bk.compose(st.rho, *st.sigma), bk.identity(sx), "rho split");
    st.tau_sigma =
        strict_witness(bk, bk.compose(st.tau, *st.sigma), c.iotas[1], "tau split");
    c.steps.push_back(std::move(st));
    return out;
}

}  // namespace secat
