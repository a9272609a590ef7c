// Single randomized instances shared between the property suites and the
// acceptance runner. Each function draws one instance, performs the whole
// construction with witnesses taken from the defining data, and throws on the
// first check that fails; runners decide the instance count and seed.
#pragma once

#include "secat/certificates.hpp"
#include "secat/chain_backend.hpp"
#include "secat/ganea.hpp"
#include "secat/generators.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace secat {
namespace props {

inline void ensure(bool ok, const char* what) {
    if (!ok) throw std::runtime_error(what);
}

// Complexes stay small on purpose: at most four generators per degree over at
// most five degrees, so a suite of hundreds of instances stays fast while the
// boundary patterns still vary.
inline ObjRef small_object(ChainBackend& H, std::mt19937& rng) {
    std::uniform_int_distribution<int> lo(-1, 0), span(1, 3);
    int l = lo(rng);
    return H.add_object(random_complex(rng, l, l + span(rng), 2, 1).X);
}

inline MapRef map_between(ChainBackend& H, std::mt19937& rng, ObjRef a, ObjRef b) {
    return H.add_map(a, b, random_chain_map(rng, H.complex_of(a), H.complex_of(b)));
}

// Factoring a map through a pushout (or a pullback) with the key induced by
// the map itself recovers the map up to homotopy, identical keys give
// identical whiskers, and keys differing by a boundary in the hom complex
// give homotopic whiskers.
inline void whisker_uniqueness_instance(ChainBackend& H, std::mt19937& rng) {
    ObjRef z = small_object(H, rng);
    ObjRef a = small_object(H, rng);
    ObjRef b = small_object(H, rng);
    MapRef u = map_between(H, rng, z, a);
    MapRef v = map_between(H, rng, z, b);
    PushoutResult po = H.h_pushout(u, v);

    ObjRef t = small_object(H, rng);
    MapRef j0 = map_between(H, rng, po.apex, t);
    MapRef f = H.compose(j0, po.in_a);
    MapRef g = H.compose(j0, po.in_b);
    WitnessRef k = H.post(j0, H.flip(po.glue));
    MapRef j1 = H.whisker_out(po, f, g, k);
    ensure(H.strict_equal(j1, H.whisker_out(po, f, g, k)),
           "whisker uniqueness: identical inputs disagree");
    ensure(H.is_homotopic(j1, j0),
           "whisker uniqueness: cocone factorisation lost the map");

    GradedMap r = random_graded(rng, H.complex_of(z).dims(), H.complex_of(t).dims(), 2);
    GradedMap shifted =
        H.witness_graded(k) + compose(H.complex_of(t).d(), r) - compose(r, H.complex_of(z).d());
    WitnessRef k2 = H.add_witness(H.compose(f, u), H.compose(g, v), shifted);
    ensure(H.is_homotopic(H.whisker_out(po, f, g, k2), j1),
           "whisker uniqueness: homotopic keys gave non-homotopic whiskers");

    MapRef fa = map_between(H, rng, a, t);
    MapRef gb = map_between(H, rng, b, t);
    PullbackResult pb = H.h_pullback(fa, gb);
    ObjRef w0 = small_object(H, rng);
    MapRef m0 = map_between(H, rng, w0, pb.apex);
    MapRef m1 = H.whisker_in(pb, H.compose(pb.pr_a, m0), H.compose(pb.pr_b, m0),
                             H.pre(pb.glue, m0));
    ensure(H.is_homotopic(m1, m0),
           "whisker uniqueness: cone factorisation lost the map");
}

// Two squares side by side, the left one a pushout by construction. The paste
// is a pushout exactly when the right one is, whether the right square is the
// genuine pushout, an equivalent deformation of it, or just a commuting
// square.
inline void prism_pushout_instance(ChainBackend& H, std::mt19937& rng) {
    ObjRef z = small_object(H, rng);
    ObjRef a = small_object(H, rng);
    ObjRef b = small_object(H, rng);
    MapRef u = map_between(H, rng, z, a);
    MapRef v = map_between(H, rng, z, b);
    PushoutResult po = H.h_pushout(u, v);
    HSquare left = H.pushout_square(po);

    ObjRef c = small_object(H, rng);
    MapRef w = map_between(H, rng, b, c);
    PushoutResult po2 = H.h_pushout(po.in_b, w);

    std::uniform_int_distribution<int> pick(0, 2);
    int which = pick(rng);
    MapRef e;
    if (which == 0) {
        e = H.identity(po2.apex);
    } else if (which == 1) {
        e = H.reduce(po2.apex).to;
    } else {
        e = map_between(H, rng, po2.apex, small_object(H, rng));
    }
    HSquare right{w, po.in_b, H.compose(e, po2.in_a), H.compose(e, po2.in_b),
                  H.post(e, H.flip(po2.glue))};
    WitnessRef wout = H.concat(H.post(right.bottom, left.w), H.pre(right.w, left.top));
    HSquare outer{H.compose(right.top, left.top), left.left,
                  H.compose(right.bottom, left.bottom), right.right, wout};
    ensure(H.square_commutes(left) && H.square_commutes(right) && H.square_commutes(outer),
           "prism pushout: a face does not commute");

    bool rs = H.is_h_pushout_square(right);
    ensure(rs == H.is_h_pushout_square(outer),
           "prism pushout: pasting changed the pushout status");
    if (which != 2) ensure(rs, "prism pushout: genuine pushout not recognised");
}

// Mirror statement: the right square a pullback by construction, the paste a
// pullback exactly when the left one is.
inline void prism_pullback_instance(ChainBackend& H, std::mt19937& rng) {
    ObjRef a = small_object(H, rng);
    ObjRef b = small_object(H, rng);
    ObjRef x = small_object(H, rng);
    MapRef f = map_between(H, rng, a, x);
    MapRef g = map_between(H, rng, b, x);
    PullbackResult pb = H.h_pullback(f, g);
    HSquare right = H.pullback_square(pb);

    ObjRef c = small_object(H, rng);
    MapRef w = map_between(H, rng, c, a);
    PullbackResult pb2 = H.h_pullback(w, pb.pr_a);

    std::uniform_int_distribution<int> pick(0, 2);
    int which = pick(rng);
    MapRef e;
    if (which == 0) {
        e = H.identity(pb2.apex);
    } else if (which == 1) {
        e = H.reduce(pb2.apex).from;
    } else {
        e = map_between(H, rng, small_object(H, rng), pb2.apex);
    }
    HSquare left{H.compose(pb2.pr_b, e), H.compose(pb2.pr_a, e), w, pb.pr_a,
                 H.pre(H.flip(pb2.glue), e)};
    WitnessRef wout = H.concat(H.post(right.bottom, left.w), H.pre(right.w, left.top));
    HSquare outer{H.compose(right.top, left.top), left.left,
                  H.compose(right.bottom, left.bottom), right.right, wout};
    ensure(H.square_commutes(left) && H.square_commutes(right) && H.square_commutes(outer),
           "prism pullback: a face does not commute");

    bool ls = H.is_h_pullback_square(left);
    ensure(ls == H.is_h_pullback_square(outer),
           "prism pullback: pasting changed the pullback status");
    if (which != 2) ensure(ls, "prism pullback: genuine pullback not recognised");
}

// Pulling a pushout square back along a map into its apex, corner by corner,
// yields a pushout square again: the top face of the cube over a pushout with
// pullback sides is a pushout.
inline void cube_axiom_instance(ChainBackend& H, std::mt19937& rng) {
    ObjRef z = small_object(H, rng);
    ObjRef a = small_object(H, rng);
    ObjRef b = small_object(H, rng);
    MapRef u = map_between(H, rng, z, a);
    MapRef v = map_between(H, rng, z, b);
    PushoutResult po = H.h_pushout(u, v);

    ObjRef q = small_object(H, rng);
    MapRef xi = map_between(H, rng, q, po.apex);
    PullbackResult pba = H.h_pullback(po.in_a, xi);
    PullbackResult pbb = H.h_pullback(po.in_b, xi);
    PullbackResult pbz = H.h_pullback(H.compose(po.in_a, u), xi);

    MapRef uu = H.whisker_in(pba, H.compose(u, pbz.pr_a), pbz.pr_b, pbz.glue);
    WitnessRef s = H.concat(pbz.glue, H.pre(H.flip(po.glue), pbz.pr_a));
    MapRef vv = H.whisker_in(pbb, H.compose(v, pbz.pr_a), pbz.pr_b, s);

    HSquare top{vv, uu, pba.pr_b, pbb.pr_b, H.refl(H.compose(pba.pr_b, uu))};
    ensure(H.square_commutes(top), "cube: top face does not commute");
    ensure(H.is_h_pushout_square(top), "cube: top face is not a pushout");
}

// Base change of a join: pulling both legs back along a map into the common
// target, the square of the comparison against the join of the pulled back
// legs is a pullback, as is the square over either inclusion.
inline void join_base_change_instance(ChainBackend& H, std::mt19937& rng) {
    ObjRef a = small_object(H, rng);
    ObjRef b = small_object(H, rng);
    ObjRef x = small_object(H, rng);
    ObjRef xp = small_object(H, rng);
    MapRef f = map_between(H, rng, a, x);
    MapRef g = map_between(H, rng, b, x);
    MapRef zeta = map_between(H, rng, xp, x);

    PullbackResult pba = H.h_pullback(f, zeta);
    PullbackResult pbb = H.h_pullback(g, zeta);
    MapRef za = pba.pr_a, fp = pba.pr_b;
    MapRef zb = pbb.pr_a, gp = pbb.pr_b;

    JoinResult jn = join(H, f, g);
    JoinResult jn2 = join(H, fp, gp);
    MapRef pa = jn2.pullback.pr_a, pb = jn2.pullback.pr_b;

    WitnessRef s = H.concat(H.concat(H.flip(H.pre(pbb.glue, pb)),
                                     H.post(zeta, jn2.pullback.glue)),
                            H.pre(pba.glue, pa));
    MapRef m = H.whisker_in(jn.pullback, H.compose(za, pa), H.compose(zb, pb), s);
    MapRef zj = H.whisker_out(jn2.pushout, H.compose(jn.pushout.in_a, za),
                              H.compose(jn.pushout.in_b, zb),
                              H.flip(H.pre(jn.pushout.glue, m)));

    HSquare over_in{jn2.pushout.in_a, za, jn.pushout.in_a, zj,
                    H.refl(H.compose(jn.pushout.in_a, za))};
    ensure(H.square_commutes(over_in), "join: inclusion square does not commute");
    ensure(H.is_h_pullback_square(over_in), "join: inclusion square is not a pullback");

    MapRef jr = H.whisker_out(jn2.pushout, H.compose(f, za), H.compose(g, zb),
                              H.pre(H.flip(jn.pullback.glue), m));
    MapRef jl = H.whisker_out(jn2.pushout, H.compose(zeta, fp), H.compose(zeta, gp),
                              H.flip(H.post(zeta, jn2.pullback.glue)));
    ensure(H.strict_equal(jr, H.compose(jn.j, zj)), "join: comparison legs drifted");
    ensure(H.strict_equal(jl, H.compose(zeta, jn2.j)), "join: pulled back legs drifted");

    WitnessRef wr =
        H.whisker_out_homotopy(jn2.pushout, jr, jl, H.flip(pba.glue), H.flip(pbb.glue));
    HSquare over_j{jn2.j, zj, jn.j, zeta, wr};
    ensure(H.square_commutes(over_j), "join: comparison square does not commute");
    ensure(H.is_h_pullback_square(over_j), "join: comparison square is not a pullback");
}

// A cofibration sequence folds into a pushout square: the square of the wedge
// projection against the fold map, with both lower legs the cofibre
// projection, is a pushout. The square witness lives on the wedge summand of
// the source and is the cone glue itself.
inline void double_cofibre_instance(ChainBackend& H, std::mt19937& rng) {
    ObjRef y = small_object(H, rng);
    ObjRef a = small_object(H, rng);
    MapRef f = map_between(H, rng, y, a);
    CofibreResult cf = cofibre(H, f);
    ObjRef x = cf.obj;
    MapRef g = cf.proj;

    ObjRef pt = H.zero_object();
    PushoutResult wpo = H.h_pushout(H.zero_map(pt, a), H.zero_map(pt, y));
    WitnessRef zk = H.refl(H.zero_map(pt, a));
    MapRef fold = H.whisker_out(wpo, H.identity(a), f, zk);
    MapRef pr1 = H.whisker_out(wpo, H.identity(a), H.zero_map(y, a), zk);

    WitnessRef zx = H.refl(H.zero_map(pt, x));
    MapRef jlft = H.whisker_out(wpo, g, H.zero_map(y, x), zx);
    MapRef jrgt = H.whisker_out(wpo, g, H.compose(g, f), zx);
    ensure(H.strict_equal(jlft, H.compose(g, pr1)), "double cofibre: left leg drifted");
    ensure(H.strict_equal(jrgt, H.compose(g, fold)), "double cofibre: right leg drifted");

    WitnessRef wsq = H.whisker_out_homotopy(wpo, jlft, jrgt, H.refl(g), cf.pushout.glue);
    HSquare sq{fold, pr1, g, g, wsq};
    ensure(H.square_commutes(sq), "double cofibre: square does not commute");
    ensure(H.is_h_pushout_square(sq), "double cofibre: square is not a pushout");
}

// The staged invariants of the tower maps themselves: the invariant of a
// stage comparison or stage fibre map truncates at the stage index, and the
// two invariants of the same map never differ by more than one.
inline void min_formula_instance(ChainBackend& H, std::mt19937& rng) {
    ObjRef a = small_object(H, rng);
    ObjRef x = small_object(H, rng);
    MapRef iota = map_between(H, rng, a, x);
    GaneaTower t(H, iota);

    InvariantResult rs = secat(t);
    InvariantResult rr = relcat(t);
    ensure(!rs.over_cap && !rr.over_cap, "min formulas: invariant over cap");
    ensure(rs.value <= rr.value && rr.value <= rs.value + 1,
           "min formulas: relcat strayed from secat");

    for (int i = 0; i <= 2; ++i) {
        t.stage(i + 1);
        GaneaTower ta(H, t.stage(i).alpha);
        InvariantResult ra = relcat(ta);
        ensure(!ra.over_cap && ra.value == std::min(i, rr.value),
               "min formulas: stage comparison relcat is off");

        MapRef beta = t.stage(i).fibre->beta;
        GaneaTower tb(H, beta);
        InvariantResult rbs = secat(tb);
        ensure(!rbs.over_cap && rbs.value == std::min(i, rs.value),
               "min formulas: stage fibre secat is off");
        InvariantResult rbr = relcat(tb);
        ensure(!rbr.over_cap && rbr.value == std::min(i + 1, rr.value),
               "min formulas: stage fibre relcat is off");
    }
}

// One full certificate round: the pinch certificate of a suspension validates
// at length one, the diagonal certificate at length two, and no accepted
// certificate undercuts the computed invariant of its map.
inline void certificate_round_instance(ChainBackend& H, std::mt19937& rng) {
    ObjRef x = small_object(H, rng);
    for (int guard = 0; H.is_contractible(x) && guard < 8; ++guard)
        x = small_object(H, rng);

    PinchCertificate pc = pinch_certificate(H, x);
    CertificateReport rp = validate_relcat_certificate(H, pc.cert, pc.p);
    ensure(rp.accepted, "certificates: pinch certificate rejected");
    ensure(rp.length == 1, "certificates: pinch certificate has the wrong length");
    InvariantResult rc = relcat(H, pc.p);
    ensure(!rc.over_cap && rc.value <= rp.length,
           "certificates: pinch length undercuts relcat");

    SuspensionComplCertificate sc = suspension_compl_certificate(H, x);
    CertificateReport rd = validate_relcat_certificate(H, sc.cert, sc.diag);
    ensure(rd.accepted, "certificates: diagonal certificate rejected");
    ensure(rd.length == 2, "certificates: diagonal certificate has the wrong length");
    InvariantResult rdc = relcat(H, sc.diag);
    ensure(!rdc.over_cap && rdc.value <= rd.length,
           "certificates: diagonal length undercuts relcat");
}

// Runs n independent instances, each on a fresh backend, and reports the
// first failure.
template <class F>
std::optional<std::string> run_suite(F&& instance, int n, unsigned seed) {
    std::mt19937 rng(seed);
    for (int k = 0; k < n; ++k) {
        ChainBackend H;
        try {
            instance(H, rng);
        } catch (const std::exception& e) {
            return "instance " + std::to_string(k) + ": " + e.what();
        }
    }
    return std::nullopt;
}

}  // namespace props
}  // namespace secat
