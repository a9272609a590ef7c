// The bounded rational chain complex model of the homotopy-category
// contract. Objects, maps and witnesses live in arena stores addressed by
// refs; minimizations are memoized per object, which is what keeps tower
// computations affordable.
#pragma once

#include "secat/chain.hpp"
#include "secat/hcat.hpp"

#include <map>
#include <vector>

namespace secat {

class ChainBackend : public HomotopyCategory {
public:
    ObjRef add_object(ChainComplex X);
    // Validated entry points; raise HcatError when the data does not typecheck.
    MapRef add_map(ObjRef src, ObjRef tgt, GradedMap f);
    WitnessRef add_witness(MapRef lhs, MapRef rhs, GradedMap s);

    const ChainComplex& complex_of(ObjRef x) const;
    const GradedMap& graded(MapRef f) const;
    const GradedMap& witness_graded(WitnessRef w) const;
    const Reduction& reduction(ObjRef x);

    std::size_t object_count() const { return objs_.size(); }
    std::size_t map_count() const { return maps_.size(); }
    std::size_t witness_count() const { return wits_.size(); }

    // HomotopyCategory interface
    ObjRef zero_object() override;
    bool is_contractible(ObjRef x) override;
    ObjRef source(MapRef f) const override;
    ObjRef target(MapRef f) const override;

    MapRef identity(ObjRef x) override;
    MapRef zero_map(ObjRef x, ObjRef y) override;
    MapRef compose(MapRef g, MapRef f) override;
    bool strict_equal(MapRef a, MapRef b) const override;

    MapRef witness_lhs(WitnessRef w) const override;
    MapRef witness_rhs(WitnessRef w) const override;
    WitnessRef refl(MapRef f) override;
    WitnessRef flip(WitnessRef w) override;
    WitnessRef concat(WitnessRef a, WitnessRef b) override;
    WitnessRef post(MapRef m, WitnessRef w) override;
    WitnessRef pre(WitnessRef w, MapRef m) override;
    bool verify(WitnessRef w) override;

    std::optional<WitnessRef> homotopy(MapRef f, MapRef g) override;

    PushoutResult h_pushout(MapRef u, MapRef v) override;
    PullbackResult h_pullback(MapRef f, MapRef g) override;
    MapRef whisker_out(const PushoutResult& po, MapRef f, MapRef g, WitnessRef K) override;
    MapRef whisker_in(const PullbackResult& pb, MapRef p, MapRef q, WitnessRef S) override;
    WitnessRef whisker_out_homotopy(const PushoutResult& po, MapRef j, MapRef jp,
                                    WitnessRef wf, WitnessRef wg) override;

    ProductResult product(ObjRef a, ObjRef b) override;
    MapRef tuple(const ProductResult& prod, MapRef pa, MapRef pb) override;
    WitnessRef tuple_witness(const ProductResult& prod, WitnessRef wa,
                             WitnessRef wb) override;

    std::optional<MapRef> section(MapRef g) override;
    std::optional<MapRef> relative_section(MapRef g, MapRef iota, MapRef alpha) override;
    std::optional<MapRef> lift(MapRef g, MapRef f) override;
    std::optional<MapRef> relative_lift(MapRef g, MapRef f, MapRef iota, MapRef tau) override;
    bool is_equivalence(MapRef f) override;
    std::optional<MapRef> equivalence_inverse(MapRef f) override;
    bool same_homotopy_type(ObjRef a, ObjRef b) override;

    ObjReduction reduce(ObjRef x) override;

    std::string describe(ObjRef x) const override;

private:
    struct MapRec {
        ObjRef src, tgt;
        GradedMap f;
    };
    struct WitRec {
        MapRef lhs, rhs;
        GradedMap s;
    };

    MapRef add_map_unchecked(ObjRef src, ObjRef tgt, GradedMap f);
    WitnessRef add_witness_unchecked(MapRef lhs, MapRef rhs, GradedMap s);
    const MapRec& rec(MapRef f) const;
    const WitRec& wrec(WitnessRef w) const;
    void require_parallel(MapRef a, MapRef b, const char* what) const;

    std::vector<ChainComplex> objs_;
    std::vector<MapRec> maps_;
    std::vector<WitRec> wits_;
    std::map<int, Reduction> reductions_;
    std::map<int, ObjReduction> reduce_cache_;
    std::map<int, SumParts> product_parts_;          // keyed by product obj id
    std::map<int, DoubleCylParts> pushout_parts_;    // keyed by apex obj id
    std::map<int, HpbParts> pullback_parts_;         // keyed by apex obj id
    std::optional<ObjRef> zero_;
};

}  // namespace secat
