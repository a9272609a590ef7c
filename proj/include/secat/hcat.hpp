// Contract for a homotopy category with enough decidable structure to run
// sectional category computations: homotopy pushouts and pullbacks with
// chosen witnesses, whiskering through them, products, section and
// relative-section solvers, and a homotopy witness algebra.
//
// Orientation conventions, used everywhere downstream:
//   * a witness w : f => g certifies that f is homotopic to g;
//   * h_pushout(u: Z->A, v: Z->B) returns glue : in_b v => in_a u;
//   * h_pullback(f: A->X, g: B->X) returns glue : g pr_b => f pr_a;
//   * whisker_out expects K : f u => g v and yields j with j in_a = f,
//     j in_b = g strictly;
//   * whisker_in expects S : g q => f p and yields w with pr_a w = p,
//     pr_b w = q strictly;
//   * an HSquare stores w : bottom left => right top, the two composites
//     running corner to corner.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace secat {

struct ObjRef {
    int id = -1;
    bool operator==(const ObjRef& o) const { return id == o.id; }
    bool operator!=(const ObjRef& o) const { return id != o.id; }
};

struct MapRef {
    int id = -1;
    bool operator==(const MapRef& o) const { return id == o.id; }
    bool operator!=(const MapRef& o) const { return id != o.id; }
};

struct WitnessRef {
    int id = -1;
    bool operator==(const WitnessRef& o) const { return id == o.id; }
    bool operator!=(const WitnessRef& o) const { return id != o.id; }
};

class HcatError : public std::runtime_error {
public:
    explicit HcatError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PushoutResult {
    ObjRef apex;
    MapRef u, v;          // the span: u: Z->A, v: Z->B
    MapRef in_a, in_b;    // A -> apex, B -> apex
    WitnessRef glue;      // in_b v => in_a u
};

struct PullbackResult {
    ObjRef apex;
    MapRef f, g;          // the cospan: f: A->X, g: B->X
    MapRef pr_a, pr_b;    // apex -> A, apex -> B
    WitnessRef glue;      // g pr_b => f pr_a
};

struct ProductResult {
    ObjRef obj;
    MapRef pr1, pr2;
};

// Replacement of an object by a homotopy equivalent (usually smaller) one;
// to and from are mutually inverse equivalences, strictly so on the small
// side, and round pins the chosen homotopy on the original.
struct ObjReduction {
    ObjRef obj;
    MapRef to;         // original -> obj
    MapRef from;       // obj -> original
    WitnessRef round;  // from to => id on the original
};

struct HSquare {
    MapRef top, left, bottom, right;
    WitnessRef w;  // bottom left => right top
};

class HomotopyCategory {
public:
    virtual ~HomotopyCategory() = default;

    virtual ObjRef zero_object() = 0;
    virtual bool is_contractible(ObjRef x) = 0;
    virtual ObjRef source(MapRef f) const = 0;
    virtual ObjRef target(MapRef f) const = 0;

    virtual MapRef identity(ObjRef x) = 0;
    virtual MapRef zero_map(ObjRef x, ObjRef y) = 0;
    virtual MapRef compose(MapRef g, MapRef f) = 0;

    // Equality of underlying representatives, not just homotopy classes;
    // witnesses certify equations between strict composites.
    virtual bool strict_equal(MapRef a, MapRef b) const = 0;

    // Witness algebra.
    virtual MapRef witness_lhs(WitnessRef w) const = 0;
    virtual MapRef witness_rhs(WitnessRef w) const = 0;
    virtual WitnessRef refl(MapRef f) = 0;
    virtual WitnessRef flip(WitnessRef w) = 0;                 // g => f
    virtual WitnessRef concat(WitnessRef a, WitnessRef b) = 0; // f => g, g => h
    virtual WitnessRef post(MapRef m, WitnessRef w) = 0;       // m f => m g
    virtual WitnessRef pre(WitnessRef w, MapRef m) = 0;        // f m => g m
    virtual bool verify(WitnessRef w) = 0;

    // Decides homotopy and returns a witness on success.
    virtual std::optional<WitnessRef> homotopy(MapRef f, MapRef g) = 0;
    bool is_homotopic(MapRef f, MapRef g) { return homotopy(f, g).has_value(); }
    bool is_nullhomotopic(MapRef f) {
        return is_homotopic(f, zero_map(source(f), target(f)));
    }

    virtual PushoutResult h_pushout(MapRef u, MapRef v) = 0;
    virtual PullbackResult h_pullback(MapRef f, MapRef g) = 0;
    virtual MapRef whisker_out(const PushoutResult& po, MapRef f, MapRef g, WitnessRef K) = 0;
    virtual MapRef whisker_in(const PullbackResult& pb, MapRef p, MapRef q, WitnessRef S) = 0;
    // Witness j => jp for whiskers out of the same pushout whose legs are
    // deformed by wf and wg; rejects the pair when their keys do not match up.
    virtual WitnessRef whisker_out_homotopy(const PushoutResult& po, MapRef j, MapRef jp,
                                            WitnessRef wf, WitnessRef wg) = 0;

    virtual ProductResult product(ObjRef a, ObjRef b) = 0;
    virtual MapRef tuple(const ProductResult& prod, MapRef pa, MapRef pb) = 0;
    // Homotopies pair coordinatewise: (fa, fb) => (ga, gb) from fa => ga, fb => gb.
    virtual WitnessRef tuple_witness(const ProductResult& prod, WitnessRef wa,
                                     WitnessRef wb) = 0;

    virtual std::optional<MapRef> section(MapRef g) = 0;
    virtual std::optional<MapRef> relative_section(MapRef g, MapRef iota, MapRef alpha) = 0;
    // phi with g phi homotopic to f: a factorization of f through g.
    virtual std::optional<MapRef> lift(MapRef g, MapRef f) = 0;
    // As lift, but also phi iota homotopic to tau.
    virtual std::optional<MapRef> relative_lift(MapRef g, MapRef f, MapRef iota,
                                                MapRef tau) = 0;
    virtual bool is_equivalence(MapRef f) = 0;
    virtual std::optional<MapRef> equivalence_inverse(MapRef f) = 0;
    virtual bool same_homotopy_type(ObjRef a, ObjRef b) = 0;

    virtual ObjReduction reduce(ObjRef x) = 0;

    virtual std::string describe(ObjRef x) const = 0;

    // The chosen square of a pushout, oriented per the HSquare convention.
    HSquare pushout_square(const PushoutResult& po) {
        return HSquare{po.v, po.u, po.in_a, po.in_b, flip(po.glue)};
    }
    HSquare pullback_square(const PullbackResult& pb) {
        return HSquare{pb.pr_b, pb.pr_a, pb.f, pb.g, flip(pb.glue)};
    }

    bool square_commutes(const HSquare& sq) {
        if (!verify(sq.w)) return false;
        return strict_equal(witness_lhs(sq.w), compose(sq.bottom, sq.left)) &&
               strict_equal(witness_rhs(sq.w), compose(sq.right, sq.top));
    }

    // The square is a homotopy pushout iff the comparison map out of the
    // chosen pushout of its span is an equivalence.
    bool is_h_pushout_square(const HSquare& sq) {
        if (!square_commutes(sq)) return false;
        PushoutResult po = h_pushout(sq.left, sq.top);
        MapRef j = whisker_out(po, sq.bottom, sq.right, sq.w);
        return is_equivalence(j);
    }

    // Dually, the comparison map into the chosen pullback of the cospan.
    bool is_h_pullback_square(const HSquare& sq) {
        if (!square_commutes(sq)) return false;
        PullbackResult pb = h_pullback(sq.bottom, sq.right);
        MapRef w = whisker_in(pb, sq.left, sq.top, flip(sq.w));
        return is_equivalence(w);
    }
};

}  // namespace secat
