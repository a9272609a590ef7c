#include "secat/chain_backend.hpp"

#include <sstream>

namespace secat {

ObjRef ChainBackend::add_object(ChainComplex X) {
    if (!X.valid()) throw HcatError("add_object: differential does not square to zero");
    objs_.push_back(std::move(X));
    return ObjRef{static_cast<int>(objs_.size()) - 1};
}

MapRef ChainBackend::add_map(ObjRef src, ObjRef tgt, GradedMap f) {
    if (!is_chain_map(complex_of(src), complex_of(tgt), f))
        throw HcatError("add_map: not a chain map between the given objects");
    return add_map_unchecked(src, tgt, std::move(f));
}

MapRef ChainBackend::add_map_unchecked(ObjRef src, ObjRef tgt, GradedMap f) {
    maps_.push_back(MapRec{src, tgt, std::move(f)});
    return MapRef{static_cast<int>(maps_.size()) - 1};
}

WitnessRef ChainBackend::add_witness(MapRef lhs, MapRef rhs, GradedMap s) {
    require_parallel(lhs, rhs, "add_witness");
    const ChainComplex& X = complex_of(source(lhs));
    const ChainComplex& Y = complex_of(target(lhs));
    if (!is_homotopy_witness(X, Y, s, graded(lhs), graded(rhs)))
        throw HcatError("add_witness: homotopy equation fails");
    return add_witness_unchecked(lhs, rhs, std::move(s));
}

WitnessRef ChainBackend::add_witness_unchecked(MapRef lhs, MapRef rhs, GradedMap s) {
    wits_.push_back(WitRec{lhs, rhs, std::move(s)});
    return WitnessRef{static_cast<int>(wits_.size()) - 1};
}

const ChainComplex& ChainBackend::complex_of(ObjRef x) const {
    if (x.id < 0 || x.id >= static_cast<int>(objs_.size()))
        throw HcatError("dangling object ref");
    return objs_[static_cast<std::size_t>(x.id)];
}

const ChainBackend::MapRec& ChainBackend::rec(MapRef f) const {
    if (f.id < 0 || f.id >= static_cast<int>(maps_.size()))
        throw HcatError("dangling map ref");
    return maps_[static_cast<std::size_t>(f.id)];
}

const ChainBackend::WitRec& ChainBackend::wrec(WitnessRef w) const {
    if (w.id < 0 || w.id >= static_cast<int>(wits_.size()))
        throw HcatError("dangling witness ref");
    return wits_[static_cast<std::size_t>(w.id)];
}

const GradedMap& ChainBackend::graded(MapRef f) const { return rec(f).f; }
const GradedMap& ChainBackend::witness_graded(WitnessRef w) const { return wrec(w).s; }

const Reduction& ChainBackend::reduction(ObjRef x) {
    auto it = reductions_.find(x.id);
    if (it == reductions_.end())
        it = reductions_.emplace(x.id, minimize(complex_of(x))).first;
    return it->second;
}

void ChainBackend::require_parallel(MapRef a, MapRef b, const char* what) const {
    if (source(a) != source(b) || target(a) != target(b))
        throw HcatError(std::string(what) + ": maps are not parallel");
}

ObjRef ChainBackend::zero_object() {
    if (!zero_) zero_ = add_object(zero_complex());
    return *zero_;
}

bool ChainBackend::is_contractible(ObjRef x) {
    return reduction(x).core.total_dim() == 0;
}

ObjRef ChainBackend::source(MapRef f) const { return rec(f).src; }
ObjRef ChainBackend::target(MapRef f) const { return rec(f).tgt; }

MapRef ChainBackend::identity(ObjRef x) {
    return add_map_unchecked(x, x, identity_graded(complex_of(x).dims()));
}

MapRef ChainBackend::zero_map(ObjRef x, ObjRef y) {
    return add_map_unchecked(x, y, zero_graded(complex_of(x).dims(), complex_of(y).dims()));
}

MapRef ChainBackend::compose(MapRef g, MapRef f) {
    if (target(f) != source(g)) throw HcatError("compose: target/source mismatch");
    return add_map_unchecked(source(f), target(g), secat::compose(graded(g), graded(f)));
}

bool ChainBackend::strict_equal(MapRef a, MapRef b) const {
    const MapRec& ra = rec(a);
    const MapRec& rb = rec(b);
    return ra.src == rb.src && ra.tgt == rb.tgt && ra.f == rb.f;
}

MapRef ChainBackend::witness_lhs(WitnessRef w) const { return wrec(w).lhs; }
MapRef ChainBackend::witness_rhs(WitnessRef w) const { return wrec(w).rhs; }

WitnessRef ChainBackend::refl(MapRef f) {
    const MapRec& r = rec(f);
    return add_witness_unchecked(
        f, f, zero_graded(complex_of(r.src).dims(), complex_of(r.tgt).dims(), 1));
}

WitnessRef ChainBackend::flip(WitnessRef w) {
    const WitRec& r = wrec(w);
    return add_witness_unchecked(r.rhs, r.lhs, -r.s);
}

WitnessRef ChainBackend::concat(WitnessRef a, WitnessRef b) {
    const WitRec& ra = wrec(a);
    const WitRec& rb = wrec(b);
    if (!strict_equal(ra.rhs, rb.lhs))
        throw HcatError("concat: witnesses do not share the middle map");
    return add_witness_unchecked(ra.lhs, rb.rhs, ra.s + rb.s);
}

WitnessRef ChainBackend::post(MapRef m, WitnessRef w) {
    const WitRec& r = wrec(w);
    if (source(m) != target(r.lhs)) throw HcatError("post: map does not follow the witness");
    return add_witness_unchecked(compose(m, r.lhs), compose(m, r.rhs),
                                 secat::compose(graded(m), r.s));
}

WitnessRef ChainBackend::pre(WitnessRef w, MapRef m) {
    const WitRec& r = wrec(w);
    if (target(m) != source(r.lhs)) throw HcatError("pre: map does not precede the witness");
    return add_witness_unchecked(compose(r.lhs, m), compose(r.rhs, m),
                                 secat::compose(r.s, graded(m)));
}

bool ChainBackend::verify(WitnessRef w) {
    const WitRec& r = wrec(w);
    const ChainComplex& X = complex_of(source(r.lhs));
    const ChainComplex& Y = complex_of(target(r.lhs));
    return is_homotopy_witness(X, Y, r.s, graded(r.lhs), graded(r.rhs));
}

std::optional<WitnessRef> ChainBackend::homotopy(MapRef f, MapRef g) {
    require_parallel(f, g, "homotopy");
    auto s = solve_homotopy(graded(f), graded(g), reduction(source(f)), reduction(target(f)));
    if (!s) return std::nullopt;
    return add_witness_unchecked(f, g, *s);
}

PushoutResult ChainBackend::h_pushout(MapRef u, MapRef v) {
    if (source(u) != source(v)) throw HcatError("h_pushout: legs must share their source");
    const ChainComplex& Z = complex_of(source(u));
    const ChainComplex& A = complex_of(target(u));
    const ChainComplex& B = complex_of(target(v));
    DoubleCylParts parts = double_cylinder(Z, A, B, graded(u), graded(v));
    PushoutResult out;
    out.apex = add_object(parts.apex);
    out.u = u;
    out.v = v;
    out.in_a = add_map_unchecked(target(u), out.apex, parts.in_a);
    out.in_b = add_map_unchecked(target(v), out.apex, parts.in_b);
    out.glue = add_witness_unchecked(compose(out.in_b, v), compose(out.in_a, u), parts.witness);
    pushout_parts_.emplace(out.apex.id, std::move(parts));
    return out;
}

PullbackResult ChainBackend::h_pullback(MapRef f, MapRef g) {
    if (target(f) != target(g)) throw HcatError("h_pullback: legs must share their target");
    const ChainComplex& A = complex_of(source(f));
    const ChainComplex& B = complex_of(source(g));
    const ChainComplex& X = complex_of(target(f));
    HpbParts parts = homotopy_pullback_apex(A, B, X, graded(f), graded(g));
    PullbackResult out;
    out.apex = add_object(parts.apex);
    out.f = f;
    out.g = g;
    out.pr_a = add_map_unchecked(out.apex, source(f), parts.pr_a);
    out.pr_b = add_map_unchecked(out.apex, source(g), parts.pr_b);
    out.glue =
        add_witness_unchecked(compose(g, out.pr_b), compose(f, out.pr_a), parts.witness);
    pullback_parts_.emplace(out.apex.id, std::move(parts));
    return out;
}

MapRef ChainBackend::whisker_out(const PushoutResult& po, MapRef f, MapRef g, WitnessRef K) {
    auto it = pushout_parts_.find(po.apex.id);
    if (it == pushout_parts_.end()) throw HcatError("whisker_out: unknown pushout apex");
    if (source(f) != target(po.u) || source(g) != target(po.v) || target(f) != target(g))
        throw HcatError("whisker_out: cocone does not match the span");
    const ChainComplex& T = complex_of(target(f));
    const ChainComplex& Z = complex_of(source(po.u));
    // K must witness f u => g v strictly.
    GradedMap want = secat::compose(graded(f), graded(po.u)) -
                     secat::compose(graded(g), graded(po.v));
    const GradedMap& k = witness_graded(K);
    if (secat::compose(T.d(), k) + secat::compose(k, Z.d()) != want)
        throw HcatError("whisker_out: key does not witness f u => g v");
    GradedMap j = secat::whisker_out(it->second, T, graded(f), graded(g), k);
    return add_map_unchecked(po.apex, target(f), j);
}

MapRef ChainBackend::whisker_in(const PullbackResult& pb, MapRef p, MapRef q, WitnessRef S) {
    auto it = pullback_parts_.find(pb.apex.id);
    if (it == pullback_parts_.end()) throw HcatError("whisker_in: unknown pullback apex");
    if (target(p) != source(pb.f) || target(q) != source(pb.g) || source(p) != source(q))
        throw HcatError("whisker_in: cone does not match the cospan");
    const ChainComplex& W = complex_of(source(p));
    const ChainComplex& X = complex_of(target(pb.f));
    // S must witness g q => f p strictly.
    GradedMap want = secat::compose(graded(pb.g), graded(q)) -
                     secat::compose(graded(pb.f), graded(p));
    const GradedMap& s = witness_graded(S);
    if (secat::compose(X.d(), s) + secat::compose(s, W.d()) != want)
        throw HcatError("whisker_in: key does not witness g q => f p");
    GradedMap w = secat::whisker_in(it->second, W, graded(p), graded(q), s);
    return add_map_unchecked(source(p), pb.apex, w);
}

WitnessRef ChainBackend::whisker_out_homotopy(const PushoutResult& po, MapRef j, MapRef jp,
                                              WitnessRef wf, WitnessRef wg) {
    auto it = pushout_parts_.find(po.apex.id);
    if (it == pushout_parts_.end())
        throw HcatError("whisker_out_homotopy: unknown pushout apex");
    if (source(j) != po.apex || source(jp) != po.apex || target(j) != target(jp))
        throw HcatError("whisker_out_homotopy: maps are not cocones out of the apex");
    const ChainComplex& T = complex_of(target(j));
    GradedMap W = secat::whisker_out_homotopy(it->second, T, witness_graded(wf),
                                              witness_graded(wg));
    if (!is_homotopy_witness(complex_of(po.apex), T, W, graded(j), graded(jp)))
        throw HcatError("whisker_out_homotopy: keys do not match up");
    return add_witness_unchecked(j, jp, W);
}

ProductResult ChainBackend::product(ObjRef a, ObjRef b) {
    SumParts parts = direct_sum(complex_of(a), complex_of(b));
    ProductResult out;
    out.obj = add_object(parts.sum);
    out.pr1 = add_map_unchecked(out.obj, a, parts.pr1);
    out.pr2 = add_map_unchecked(out.obj, b, parts.pr2);
    product_parts_.emplace(out.obj.id, std::move(parts));
    return out;
}

MapRef ChainBackend::tuple(const ProductResult& prod, MapRef pa, MapRef pb) {
    auto it = product_parts_.find(prod.obj.id);
    if (it == product_parts_.end()) throw HcatError("tuple: unknown product object");
    if (source(pa) != source(pb)) throw HcatError("tuple: components must share their source");
    if (target(pa) != target(prod.pr1) || target(pb) != target(prod.pr2))
        throw HcatError("tuple: components do not match the factors");
    GradedMap m = secat::compose(it->second.in1, graded(pa)) +
                  secat::compose(it->second.in2, graded(pb));
    return add_map_unchecked(source(pa), prod.obj, m);
}

WitnessRef ChainBackend::tuple_witness(const ProductResult& prod, WitnessRef wa,
                                       WitnessRef wb) {
    auto it = product_parts_.find(prod.obj.id);
    if (it == product_parts_.end()) throw HcatError("tuple_witness: unknown product object");
    const WitRec& ra = wrec(wa);
    const WitRec& rb = wrec(wb);
    if (source(ra.lhs) != source(rb.lhs))
        throw HcatError("tuple_witness: components must share their source");
    if (target(ra.lhs) != target(prod.pr1) || target(rb.lhs) != target(prod.pr2))
        throw HcatError("tuple_witness: components do not match the factors");
    GradedMap s = secat::compose(it->second.in1, ra.s) +
                  secat::compose(it->second.in2, rb.s);
    return add_witness_unchecked(tuple(prod, ra.lhs, rb.lhs),
                                 tuple(prod, ra.rhs, rb.rhs), s);
}

std::optional<MapRef> ChainBackend::section(MapRef g) {
    auto s = solve_section(graded(g), reduction(source(g)), reduction(target(g)));
    if (!s) return std::nullopt;
    return add_map_unchecked(target(g), source(g), *s);
}

std::optional<MapRef> ChainBackend::relative_section(MapRef g, MapRef iota, MapRef alpha) {
    if (target(iota) != target(g) || source(alpha) != source(iota) ||
        target(alpha) != source(g))
        throw HcatError("relative_section: shape mismatch");
    auto s = solve_rel_section(graded(g), graded(iota), graded(alpha), reduction(source(g)),
                               reduction(target(g)), reduction(source(iota)));
    if (!s) return std::nullopt;
    return add_map_unchecked(target(g), source(g), *s);
}

std::optional<MapRef> ChainBackend::lift(MapRef g, MapRef f) {
    if (target(f) != target(g)) throw HcatError("lift: targets differ");
    auto phi = solve_lift(graded(g), graded(f), reduction(source(g)),
                          reduction(target(g)), reduction(source(f)));
    if (!phi) return std::nullopt;
    return add_map_unchecked(source(f), source(g), *phi);
}

std::optional<MapRef> ChainBackend::relative_lift(MapRef g, MapRef f, MapRef iota,
                                                  MapRef tau) {
    if (target(f) != target(g) || target(iota) != source(f) ||
        source(tau) != source(iota) || target(tau) != source(g))
        throw HcatError("relative_lift: shape mismatch");
    auto phi = solve_rel_lift(graded(g), graded(f), graded(iota), graded(tau),
                              reduction(source(g)), reduction(target(g)),
                              reduction(source(f)), reduction(source(iota)));
    if (!phi) return std::nullopt;
    return add_map_unchecked(source(f), source(g), *phi);
}

bool ChainBackend::is_equivalence(MapRef f) {
    return is_quasi_iso(graded(f), reduction(source(f)), reduction(target(f)));
}

bool ChainBackend::same_homotopy_type(ObjRef a, ObjRef b) {
    // Over the rationals an object is equivalent to its zero-differential
    // core, so equal core dimensions decide the question.
    return reduction(a).core.dims() == reduction(b).core.dims();
}

std::optional<MapRef> ChainBackend::equivalence_inverse(MapRef f) {
    auto inv = solve_inverse(graded(f), reduction(source(f)), reduction(target(f)));
    if (!inv) return std::nullopt;
    return add_map_unchecked(target(f), source(f), *inv);
}

ObjReduction ChainBackend::reduce(ObjRef x) {
    auto it = reduce_cache_.find(x.id);
    if (it != reduce_cache_.end()) return it->second;
    const Reduction& r = reduction(x);
    ObjReduction out;
    out.obj = add_object(r.core);
    out.to = add_map_unchecked(x, out.obj, r.retr);
    out.from = add_map_unchecked(out.obj, x, r.incl);
    out.round = add_witness_unchecked(compose(out.from, out.to), identity(x), r.h);
    reduce_cache_.emplace(x.id, out);
    return out;
}

std::string ChainBackend::describe(ObjRef x) const {
    const ChainComplex& X = complex_of(x);
    if (X.is_zero_object()) return "0";
    std::ostringstream os;
    os << "C[" << X.lo() << ".." << X.hi() << "] dims ";
    for (int n = X.lo(); n <= X.hi(); ++n) {
        if (n > X.lo()) os << ",";
        os << X.dim(n);
    }
    return os.str();
}

}  // namespace secat
