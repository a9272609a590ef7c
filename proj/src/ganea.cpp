#include "secat/ganea.hpp"

#include <utility>

namespace secat {

namespace {

// Homotopies required here are guaranteed by the construction; a miss means a
// wiring bug, not a negative answer, so we throw instead of propagating an
// optional.
WitnessRef require_homotopy(HomotopyCategory& hc, MapRef f, MapRef g, const char* what) {
    auto w = hc.homotopy(f, g);
    if (!w) throw HcatError(std::string("expected homotopy missing: ") + what);
    return *w;
}

}  // namespace

GaneaTower::GaneaTower(HomotopyCategory& hc, MapRef iota)
    : hc_(hc), iota_(iota), A_(hc.source(iota)), X_(hc.target(iota)) {
    Stage s0;
    s0.G = A_;
    s0.g = iota_;
    s0.alpha = hc_.identity(A_);
    s0.g_alpha = require_homotopy(hc_, hc_.compose(s0.g, s0.alpha), iota_, "stage 0 over-map");
    stages_.push_back(std::move(s0));
}

const GaneaTower::Stage& GaneaTower::stage(int i) {
    if (i < 0) throw HcatError("tower stage index is negative");
    while (built() < i) extend();
    return stages_[static_cast<std::size_t>(i)];
}

void GaneaTower::extend() {
    Stage& cur = stages_.back();

    Fibre fb;
    fb.pb = hc_.h_pullback(cur.g, iota_);
    fb.F = fb.pb.apex;
    fb.beta = fb.pb.pr_a;
    fb.eta = fb.pb.pr_b;
    fb.glue = fb.pb.glue;
    // Section of eta over the base point of the fibre data: beta theta = alpha
    // and eta theta = id on the nose.
    fb.theta = hc_.whisker_in(fb.pb, cur.alpha, hc_.identity(A_), hc_.flip(cur.g_alpha));
    fb.beta_theta =
        require_homotopy(hc_, hc_.compose(fb.beta, fb.theta), cur.alpha, "beta theta");

    fb.po = hc_.h_pushout(fb.eta, fb.beta);
    MapRef g_raw = hc_.whisker_out(fb.po, iota_, cur.g, fb.glue);
    fb.red = hc_.reduce(fb.po.apex);

    Stage nxt;
    nxt.G = fb.red.obj;
    nxt.g = hc_.compose(g_raw, fb.red.from);
    nxt.alpha = hc_.compose(fb.red.to, fb.po.in_a);
    fb.gamma = hc_.compose(fb.red.to, fb.po.in_b);
    nxt.g_alpha =
        require_homotopy(hc_, hc_.compose(nxt.g, nxt.alpha), iota_, "next over-map");
    fb.gamma_alpha = require_homotopy(hc_, hc_.compose(fb.gamma, cur.alpha), nxt.alpha,
                                      "gamma alpha");

    cur.fibre = std::move(fb);
    stages_.push_back(std::move(nxt));
}

InvariantResult secat(GaneaTower& t, int cap) {
    HomotopyCategory& hc = t.category();
    std::vector<StageNote> trace;
    for (int n = 0; n <= cap; ++n) {
        const GaneaTower::Stage& s = t.stage(n);
        if (auto sec = hc.section(s.g)) {
            trace.push_back({n, true, "section through " + hc.describe(s.G)});
            return InvariantResult::found(n, cap, *sec, std::move(trace));
        }
        trace.push_back({n, false, "no section through " + hc.describe(s.G)});
    }
    return InvariantResult::overflow(cap, std::move(trace));
}

InvariantResult secat(HomotopyCategory& hc, MapRef iota, int cap) {
    GaneaTower t(hc, iota);
    return secat(t, cap);
}

InvariantResult relcat(GaneaTower& t, int cap) {
    HomotopyCategory& hc = t.category();
    std::vector<StageNote> trace;
    for (int n = 0; n <= cap; ++n) {
        const GaneaTower::Stage& s = t.stage(n);
        if (auto sec = hc.relative_section(s.g, t.iota(), s.alpha)) {
            trace.push_back({n, true, "relative section through " + hc.describe(s.G)});
            return InvariantResult::found(n, cap, *sec, std::move(trace));
        }
        trace.push_back({n, false, "no relative section through " + hc.describe(s.G)});
    }
    return InvariantResult::overflow(cap, std::move(trace));
}

InvariantResult relcat(HomotopyCategory& hc, MapRef iota, int cap) {
    GaneaTower t(hc, iota);
    return relcat(t, cap);
}

InvariantResult cat_obj(HomotopyCategory& hc, ObjRef x, int cap) {
    return secat(hc, hc.zero_map(hc.zero_object(), x), cap);
}

InvariantResult cat_map(HomotopyCategory& hc, MapRef f, int cap) {
    FibreResult fr = fibre(hc, f);
    return secat(hc, fr.incl, cap);
}

MapRef diagonal(HomotopyCategory& hc, ObjRef x) {
    ProductResult p = hc.product(x, x);
    return hc.tuple(p, hc.identity(x), hc.identity(x));
}

InvariantResult compl_obj(HomotopyCategory& hc, ObjRef x, int cap) {
    return secat(hc, diagonal(hc, x), cap);
}

InvariantResult relcompl_obj(HomotopyCategory& hc, ObjRef x, int cap) {
    return relcat(hc, diagonal(hc, x), cap);
}

InvariantResult compl_map(HomotopyCategory& hc, MapRef iota, int cap) {
    ObjRef A = hc.source(iota);
    ProductResult p = hc.product(hc.target(iota), A);
    return secat(hc, hc.tuple(p, iota, hc.identity(A)), cap);
}

JoinResult join(HomotopyCategory& hc, MapRef f, MapRef g) {
    JoinResult r;
    r.pullback = hc.h_pullback(f, g);
    r.pushout = hc.h_pushout(r.pullback.pr_a, r.pullback.pr_b);
    r.obj = r.pushout.apex;
    r.j = hc.whisker_out(r.pushout, f, g, hc.flip(r.pullback.glue));
    return r;
}

FibreResult fibre(HomotopyCategory& hc, MapRef f) {
    FibreResult r;
    r.pullback = hc.h_pullback(f, hc.zero_map(hc.zero_object(), hc.target(f)));
    r.obj = r.pullback.apex;
    r.incl = r.pullback.pr_a;
    return r;
}

CofibreResult cofibre(HomotopyCategory& hc, MapRef f) {
    CofibreResult r;
    r.pushout = hc.h_pushout(f, hc.zero_map(hc.source(f), hc.zero_object()));
    r.obj = r.pushout.apex;
    r.proj = r.pushout.in_a;
    return r;
}

SuspensionResult suspend(HomotopyCategory& hc, ObjRef x) {
    SuspensionResult r;
    MapRef collapse = hc.zero_map(x, hc.zero_object());
    r.pushout = hc.h_pushout(collapse, collapse);
    r.obj = r.pushout.apex;
    r.coord = r.pushout.glue;
    return r;
}

namespace {

// Shared bracketing logic for the pushout-style invariants. The lower bound is
// the relative value, the upper bound the best of: one above the plain value,
// zero when the map is already split, and a validated certificate length when
// the caller has one.
StrongInterval strong_interval(HomotopyCategory& hc, MapRef iota, int cap, long certified) {
    GaneaTower t(hc, iota);
    InvariantResult rel = relcat(t, cap);
    StrongInterval iv;
    if (rel.over_cap) {
        iv.lo = cap + 1;
        iv.lo_over_cap = true;
    } else {
        iv.lo = rel.value;
    }
    long hi = -1;
    InvariantResult sec = secat(t, cap);
    if (!sec.over_cap) hi = sec.value + 1;
    if (!rel.over_cap && rel.value == 0) hi = 0;
    if (certified >= 0 && (hi < 0 || certified < hi)) hi = certified;
    if (hi >= 0 && !iv.lo_over_cap && hi < iv.lo)
        throw HcatError("certified value sits below the computed lower bound");
    iv.hi = hi;
    return iv;
}

}  // namespace

StrongInterval pushcat_interval(HomotopyCategory& hc, MapRef iota, int cap, long certified) {
    return strong_interval(hc, iota, cap, certified);
}

StrongInterval relcat_interval(HomotopyCategory& hc, MapRef iota, int cap, long certified) {
    return strong_interval(hc, iota, cap, certified);
}

WhiteheadTower::WhiteheadTower(GaneaTower& gt) : gt_(gt) {
    HomotopyCategory& hc = gt_.category();
    ObjRef A = gt_.domain();
    ObjRef X = gt_.base();
    const GaneaTower::Stage& g0 = gt_.stage(0);

    Stage s;
    s.power = hc.zero_object();
    s.next_power = X;
    s.corner = A;
    s.T = A;
    s.t = gt_.iota();
    s.upsilon = hc.identity(A);
    s.delta = hc.identity(A);
    s.epsilon = hc.identity(A);
    s.tau = hc.identity(A);
    s.Delta = hc.identity(X);
    s.left = HSquare{s.delta, g0.alpha, s.epsilon, s.upsilon,
                     require_homotopy(hc, hc.compose(s.epsilon, g0.alpha),
                                      hc.compose(s.upsilon, s.delta), "base left square")};
    s.right = HSquare{s.epsilon, g0.g, s.Delta, s.t,
                      require_homotopy(hc, hc.compose(s.Delta, g0.g),
                                       hc.compose(s.t, s.epsilon), "base right square")};
    stages_.push_back(std::move(s));
}

const WhiteheadTower::Stage& WhiteheadTower::stage(int i) {
    if (i < 0) throw HcatError("tower stage index is negative");
    while (built() < i) extend();
    return stages_[static_cast<std::size_t>(i)];
}

void WhiteheadTower::extend() {
    HomotopyCategory& hc = gt_.category();
    ObjRef A = gt_.domain();
    ObjRef X = gt_.base();
    const Stage& prev = stages_.back();
    int i = built() + 1;

    Stage s;
    s.power = prev.next_power;
    s.next_prod = hc.product(s.power, X);
    s.next_power = s.next_prod->obj;
    s.corner_prod = hc.product(s.power, A);
    s.corner = s.corner_prod->obj;

    // The two legs over the power: fix the last coordinate in the image of
    // iota, or constrain the first i coordinates to the previous stage.
    MapRef leg_a = hc.tuple(*s.next_prod, s.corner_prod->pr1,
                            hc.compose(gt_.iota(), s.corner_prod->pr2));
    ProductResult prev_tx = hc.product(prev.T, X);
    MapRef leg_b =
        hc.tuple(*s.next_prod, hc.compose(prev.t, prev_tx.pr1), prev_tx.pr2);
    JoinResult jn = join(hc, leg_a, leg_b);
    ObjReduction red = hc.reduce(jn.obj);
    s.T = red.obj;
    s.t = hc.compose(jn.j, red.from);
    s.upsilon = hc.compose(red.to, jn.pushout.in_a);

    s.Delta = hc.tuple(*s.next_prod, prev.Delta, hc.identity(X));
    s.delta = hc.tuple(*s.corner_prod, hc.compose(prev.Delta, gt_.iota()), hc.identity(A));
    s.tau = hc.compose(s.upsilon, s.delta);

    // epsilon out of the stage pushout: delta on the cone leg, the previous
    // comparison paired with the previous over-map on the other. Its glue is
    // not free: whiskering keeps the homotopy in the shifted block, so it has
    // to come from the join glue through the canonical corner comparison.
    const GaneaTower::Stage& gcur = gt_.stage(i);
    const GaneaTower::Stage& gprev = gt_.stage(i - 1);
    const GaneaTower::Fibre& fb = *gprev.fibre;
    MapRef paired = hc.tuple(prev_tx, prev.epsilon, gprev.g);
    MapRef corner_leg = hc.compose(s.delta, fb.eta);
    MapRef band_leg = hc.compose(paired, fb.beta);
    WitnessRef over_first = hc.concat(hc.post(prev.Delta, fb.glue),
                                      hc.pre(prev.right.w, fb.beta));
    WitnessRef corner_glue =
        hc.flip(hc.tuple_witness(*s.next_prod, over_first, fb.glue));
    MapRef into_join =
        hc.whisker_in(jn.pullback, corner_leg, band_leg, corner_glue);
    WitnessRef K = hc.flip(hc.pre(jn.pushout.glue, into_join));
    MapRef eps_raw =
        hc.whisker_out(fb.po, hc.compose(jn.pushout.in_a, s.delta),
                       hc.compose(jn.pushout.in_b, paired), K);
    s.epsilon = hc.compose(red.to, hc.compose(eps_raw, fb.red.from));

    s.left = HSquare{s.delta, gcur.alpha, s.epsilon, s.upsilon,
                     require_homotopy(hc, hc.compose(s.epsilon, gcur.alpha),
                                      hc.compose(s.upsilon, s.delta), "left square")};
    s.right = HSquare{s.epsilon, gcur.g, s.Delta, s.t,
                      require_homotopy(hc, hc.compose(s.Delta, gcur.g),
                                       hc.compose(s.t, s.epsilon), "right square")};
    stages_.push_back(std::move(s));
}

InvariantResult secat_whitehead(WhiteheadTower& wt, int cap) {
    HomotopyCategory& hc = wt.category();
    std::vector<StageNote> trace;
    for (int n = 0; n <= cap; ++n) {
        const WhiteheadTower::Stage& s = wt.stage(n);
        if (auto rho = hc.lift(s.t, s.Delta)) {
            trace.push_back({n, true, "diagonal factors through " + hc.describe(s.T)});
            return InvariantResult::found(n, cap, *rho, std::move(trace));
        }
        trace.push_back({n, false, "diagonal misses " + hc.describe(s.T)});
    }
    return InvariantResult::overflow(cap, std::move(trace));
}

InvariantResult relcat_whitehead(WhiteheadTower& wt, int cap) {
    HomotopyCategory& hc = wt.category();
    GaneaTower& gt = wt.ganea();
    std::vector<StageNote> trace;
    for (int n = 0; n <= cap; ++n) {
        const WhiteheadTower::Stage& s = wt.stage(n);
        if (auto rho = hc.relative_lift(s.t, s.Delta, gt.iota(), s.tau)) {
            trace.push_back({n, true, "diagonal factors through " + hc.describe(s.T)});
            return InvariantResult::found(n, cap, *rho, std::move(trace));
        }
        trace.push_back({n, false, "diagonal misses " + hc.describe(s.T)});
    }
    return InvariantResult::overflow(cap, std::move(trace));
}

DiagonalFamily diagonal_family(WhiteheadTower& wt, int i) {
    HomotopyCategory& hc = wt.category();
    GaneaTower& gt = wt.ganea();
    const WhiteheadTower::Stage& s = wt.stage(i);
    DiagonalFamily d;
    d.Delta = s.Delta;
    d.delta = s.delta;
    d.epsilon = s.epsilon;
    d.tau = s.tau;
    d.left = s.left;
    d.right = s.right;
    ObjRef z = hc.zero_object();
    MapRef in1 = s.corner_prod
                     ? hc.tuple(*s.corner_prod, hc.identity(s.power),
                                hc.zero_map(s.power, gt.domain()))
                     : hc.zero_map(s.power, s.corner);
    d.corner = HSquare{hc.zero_map(z, gt.domain()), hc.zero_map(z, s.power), in1, s.delta,
                       require_homotopy(hc, hc.compose(in1, hc.zero_map(z, s.power)),
                                        hc.compose(s.delta, hc.zero_map(z, gt.domain())),
                                        "corner square")};
    return d;
}

BaseChange base_change(GaneaTower& upper, GaneaTower& lower, MapRef zeta, MapRef f,
                       WitnessRef outer, int upto) {
    HomotopyCategory& hc = upper.category();
    if (&hc != &lower.category())
        throw HcatError("base_change: towers live over different categories");
    if (hc.source(zeta) != upper.domain() || hc.target(zeta) != lower.domain() ||
        hc.source(f) != upper.base() || hc.target(f) != lower.base())
        throw HcatError("base_change: square endpoints do not line up");
    if (!hc.verify(outer) ||
        !hc.strict_equal(hc.witness_lhs(outer), hc.compose(lower.iota(), zeta)) ||
        !hc.strict_equal(hc.witness_rhs(outer), hc.compose(f, upper.iota())))
        throw HcatError("base_change: outer witness does not frame the square");

    BaseChange bc;
    MapRef zi = zeta;
    WitnessRef w = outer;
    for (int i = 0;; ++i) {
        const GaneaTower::Stage& us = upper.stage(i);
        const GaneaTower::Stage& ls = lower.stage(i);
        bc.zeta.push_back(zi);
        bc.squares.push_back(HSquare{us.g, zi, ls.g, f, w});
        if (i == upto) break;

        upper.stage(i + 1);
        lower.stage(i + 1);
        const GaneaTower::Fibre& ufb = *upper.stage(i).fibre;
        const GaneaTower::Fibre& lfb = *lower.stage(i).fibre;

        // Map between the stage fibres: strictly compatible with both
        // projections, so the pushout comparison below can reuse the glue of
        // the lower stage by value. Its glue has to be the composite of the
        // outer square, the upper glue and this stage's square, or the next
        // stage's square fails to close.
        MapRef p = hc.compose(zi, ufb.beta);
        MapRef q = hc.compose(zeta, ufb.eta);
        WitnessRef S = hc.concat(hc.concat(hc.pre(outer, ufb.eta),
                                           hc.post(f, ufb.glue)),
                                 hc.flip(hc.pre(w, ufb.beta)));
        MapRef m = hc.whisker_in(lfb.pb, p, q, S);

        const GaneaTower::Stage& lnxt = lower.stage(i + 1);
        WitnessRef K = hc.pre(hc.post(lfb.red.to, hc.flip(lfb.po.glue)), m);
        MapRef j = hc.whisker_out(ufb.po, hc.compose(lnxt.alpha, zeta),
                                  hc.compose(lfb.gamma, zi), K);

        // Witness for the next square, assembled rather than solved: the
        // comparison is straightened against the lower reduction, then its
        // legs are carried onto f through the outer and current squares.
        MapRef lraw = hc.whisker_out(lfb.po, lower.iota(), ls.g, lfb.glue);
        MapRef jraw = hc.whisker_out(ufb.po, hc.compose(lfb.po.in_a, zeta),
                                     hc.compose(lfb.po.in_b, zi),
                                     hc.flip(hc.pre(lfb.po.glue, m)));
        WitnessRef straighten = hc.post(lraw, hc.pre(lfb.red.round, jraw));
        MapRef j2 = hc.whisker_out(ufb.po, hc.compose(lower.iota(), zeta),
                                   hc.compose(ls.g, zi), S);
        MapRef j3 = hc.whisker_out(ufb.po, hc.compose(f, upper.iota()),
                                   hc.compose(f, us.g), hc.post(f, ufb.glue));
        WitnessRef shift = hc.whisker_out_homotopy(ufb.po, j2, j3, outer, w);
        w = hc.pre(hc.concat(straighten, shift), ufb.red.from);
        zi = hc.compose(j, ufb.red.from);
    }
    return bc;
}

}  // namespace secat
