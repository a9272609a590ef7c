// Towers over a homotopy category and the sectional invariants computed from
// them. Each tower stage is the pushout of the pullback of the previous stage
// map against the map under study, with the next stage map obtained by
// whiskering; stages are replaced by their reductions so the construction
// stays small. All decisions below are homotopy invariant, so computing on
// reduced stages is sound.
#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "secat/hcat.hpp"

namespace secat {

inline constexpr int kDefaultCap = 4;

struct StageNote {
    int stage = 0;
    bool success = false;
    std::string note;
};

// Outcome of a staged search: the least stage admitting the requested section
// together with that section, or the statement that all stages up to the cap
// failed.
struct InvariantResult {
    bool over_cap = false;
    int value = -1;  // meaningful only when !over_cap
    int cap = kDefaultCap;
    std::optional<MapRef> witness;
    std::vector<StageNote> trace;

    static InvariantResult found(int v, int cap, MapRef w, std::vector<StageNote> t) {
        InvariantResult r;
        r.value = v;
        r.cap = cap;
        r.witness = w;
        r.trace = std::move(t);
        return r;
    }
    static InvariantResult overflow(int cap, std::vector<StageNote> t) {
        InvariantResult r;
        r.over_cap = true;
        r.cap = cap;
        r.trace = std::move(t);
        return r;
    }
};

class GaneaTower {
public:
    GaneaTower(HomotopyCategory& hc, MapRef iota);

    struct Fibre {
        PullbackResult pb;       // of (g_i, iota); apex is F_i
        PushoutResult po;        // of (eta_i, beta_i); apex is the raw next stage
        ObjReduction red;        // raw next stage -> G_{i+1}
        ObjRef F;
        MapRef beta;             // F_i -> G_i
        MapRef eta;              // F_i -> A
        MapRef theta;            // A -> F_i
        MapRef gamma;            // G_i -> G_{i+1}
        WitnessRef glue;         // iota eta => g beta
        WitnessRef beta_theta;   // beta theta => alpha
        WitnessRef gamma_alpha;  // gamma alpha => next alpha
    };

    struct Stage {
        ObjRef G;
        MapRef g;              // G_i -> X
        MapRef alpha;          // A -> G_i
        WitnessRef g_alpha;    // g alpha => iota
        std::optional<Fibre> fibre;  // present once stage i+1 exists
    };

    HomotopyCategory& category() { return hc_; }
    MapRef iota() const { return iota_; }
    ObjRef domain() const { return A_; }
    ObjRef base() const { return X_; }

    // Builds stages up to and including i. References stay valid as the tower
    // grows.
    const Stage& stage(int i);
    int built() const { return static_cast<int>(stages_.size()) - 1; }

private:
    void extend();

    HomotopyCategory& hc_;
    MapRef iota_;
    ObjRef A_, X_;
    std::deque<Stage> stages_;
};

// Least n such that g_n has a homotopy section.
InvariantResult secat(GaneaTower& t, int cap = kDefaultCap);
InvariantResult secat(HomotopyCategory& hc, MapRef iota, int cap = kDefaultCap);

// Least n with a homotopy section sigma of g_n satisfying sigma iota ~ alpha_n.
InvariantResult relcat(GaneaTower& t, int cap = kDefaultCap);
InvariantResult relcat(HomotopyCategory& hc, MapRef iota, int cap = kDefaultCap);

// Invariants of objects and maps derived from the staged search.
InvariantResult cat_obj(HomotopyCategory& hc, ObjRef x, int cap = kDefaultCap);
InvariantResult cat_map(HomotopyCategory& hc, MapRef f, int cap = kDefaultCap);
InvariantResult compl_obj(HomotopyCategory& hc, ObjRef x, int cap = kDefaultCap);
InvariantResult relcompl_obj(HomotopyCategory& hc, ObjRef x, int cap = kDefaultCap);
InvariantResult compl_map(HomotopyCategory& hc, MapRef iota, int cap = kDefaultCap);

// The diagonal into the chosen binary product.
MapRef diagonal(HomotopyCategory& hc, ObjRef x);

// Pushout of the pullback of (f, g), with the whisker map back to the common
// target. j restricts to f and g strictly on the two inclusions.
struct JoinResult {
    PullbackResult pullback;
    PushoutResult pushout;
    ObjRef obj;
    MapRef j;
};
JoinResult join(HomotopyCategory& hc, MapRef f, MapRef g);

struct FibreResult {
    PullbackResult pullback;
    ObjRef obj;
    MapRef incl;  // obj -> source(f)
};
FibreResult fibre(HomotopyCategory& hc, MapRef f);

struct CofibreResult {
    PushoutResult pushout;
    ObjRef obj;
    MapRef proj;  // target(f) -> obj
};
CofibreResult cofibre(HomotopyCategory& hc, MapRef f);

// Pushout of the point span under x; the glue witness carries the degree-one
// coordinate of the construction and is used by certificate builders.
struct SuspensionResult {
    PushoutResult pushout;
    ObjRef obj;
    WitnessRef coord;  // between the two null composites from x
};
SuspensionResult suspend(HomotopyCategory& hc, ObjRef x);

// Interval bracketing a strong (pushout-style) invariant: lo comes from the
// computed relative value, hi from the chain of comparisons and, when one is
// supplied, a validated certificate length.
struct StrongInterval {
    long lo = 0;
    long hi = -1;  // -1 when no finite upper bound was established
    bool lo_over_cap = false;
    bool is_point() const { return !lo_over_cap && hi == lo; }
};
StrongInterval pushcat_interval(HomotopyCategory& hc, MapRef iota,
                                int cap = kDefaultCap, long certified = -1);
StrongInterval relcat_interval(HomotopyCategory& hc, MapRef iota,
                               int cap = kDefaultCap, long certified = -1);

// Fat-wedge style tower over the same map, built by iterated joins of product
// maps, with the comparison maps into it from the corresponding GaneaTower
// stages. Stage i sits over the (i+1)-fold power of the base.
class WhiteheadTower {
public:
    explicit WhiteheadTower(GaneaTower& gt);

    struct Stage {
        ObjRef power;      // X^i; the zero object at i = 0
        ObjRef next_power; // X^{i+1}
        ObjRef corner;     // X^i x A; A itself at i = 0
        ObjRef T;
        MapRef t;          // T -> X^{i+1}
        MapRef upsilon;    // corner -> T
        MapRef delta;      // A -> corner
        MapRef epsilon;    // G_i -> T
        MapRef tau;        // A -> T
        MapRef Delta;      // X -> X^{i+1}
        HSquare left;      // alpha / delta / upsilon / epsilon
        HSquare right;     // g / epsilon / t / Delta
        // Product structures behind next_power and corner; absent at i = 0
        // where neither is a genuine product.
        std::optional<ProductResult> next_prod, corner_prod;
    };

    HomotopyCategory& category() { return gt_.category(); }
    GaneaTower& ganea() { return gt_; }
    const Stage& stage(int i);
    int built() const { return static_cast<int>(stages_.size()) - 1; }

private:
    void extend();

    GaneaTower& gt_;
    std::deque<Stage> stages_;
};

// Sections through the fat wedge; agree with the tower versions above.
InvariantResult secat_whitehead(WhiteheadTower& wt, int cap = kDefaultCap);
InvariantResult relcat_whitehead(WhiteheadTower& wt, int cap = kDefaultCap);

// The comparison data between a stage of the two towers and the power of the
// base, including the corner square over the plain power.
struct DiagonalFamily {
    MapRef Delta;    // X -> X^{i+1}
    MapRef delta;    // A -> X^i x A
    MapRef epsilon;  // G_i -> T_i
    MapRef tau;      // A -> T_i
    HSquare corner;  // zero maps over X^i -> X^i x A
    HSquare left;
    HSquare right;
};
DiagonalFamily diagonal_family(WhiteheadTower& wt, int i);

// Stagewise comparison of towers along a commuting square f kappa ~ iota zeta,
// with zeta_0 = zeta and each square g_i(iota) zeta_i ~ f g_i(kappa). The
// outer witness frames the given square; every later witness is derived from
// it, so when the outer square is a pullback the stage squares are too.
struct BaseChange {
    std::vector<MapRef> zeta;
    std::vector<HSquare> squares;  // top g_i(kappa), left zeta_i, bottom g_i(iota), right f
};
BaseChange base_change(GaneaTower& upper, GaneaTower& lower, MapRef zeta, MapRef f,
                       WitnessRef outer, int upto);

}  // namespace secat
