#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "secat/instances.hpp"
#include "secat/bounds.hpp"

#include <functional>
#include <random>

using namespace secat;

namespace {

void check_iv(const BoundsDb& db, const Key& k, int lo, int hi) {
    Interval iv = db.interval(k);
    std::string where = key_text(k) + " is " + interval_text(iv);
    CHECK_MESSAGE(iv.lo == lo, where);
    CHECK_MESSAGE(iv.hi == hi, where);
}

bool fired(const BoundsDb& db, const std::string& rule) {
    for (const Derivation& d : db.log())
        if (d.rule == rule) return true;
    return false;
}

bool fired_at(const BoundsDb& db, const std::string& rule, const Key& k) {
    for (const Derivation& d : db.log())
        if (d.rule == rule && d.target == k) return true;
    return false;
}

std::string thrown(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

bool has(const std::string& s, const std::string& sub) {
    return s.find(sub) != std::string::npos;
}

// Attaching map with a category jump: h with cofibre cp2, cat(s2) = 1,
// cat(cp2) = 2.
BoundsDb hopf_db() {
    BoundsDb db;
    db.declare(object_entity("s3"));
    db.declare(object_entity("s2"));
    db.declare(map_entity("h", "s3", "s2"));
    Entity cp2 = object_entity("cp2");
    cp2.cofibre_of = "h";
    db.declare(cp2);
    db.assert_fact({"s2", Inv::cat}, {1, 1}, "golden");
    db.assert_fact({"cp2", Inv::cat}, {2, 2}, "golden");
    return db;
}

// Map into an even sphere with a diagonal estimate from cohomology and the
// category of the square of the target.
BoundsDb diag_db() {
    BoundsDb db;
    db.declare(object_entity("cp3"));
    db.declare(object_entity("s4"));
    Entity p = object_entity("s4xs4");
    p.product_of = {"s4", "s4"};
    db.declare(p);
    db.declare(map_entity("iota", "cp3", "s4"));
    db.assert_fact({"s4xs4", Inv::cat}, {2, 2}, "golden");
    db.assert_fact({"iota", Inv::compl_map}, {2, kNoBound}, "estimator");
    return db;
}

// Even spheres as suspensions with cohomological lower estimates.
BoundsDb sphere_db() {
    BoundsDb db;
    const char* odd[] = {"s1", "s3", "s5"};
    const char* even[] = {"s2", "s4", "s6"};
    for (int i = 0; i < 3; ++i) {
        db.declare(object_entity(odd[i]));
        Entity s = object_entity(even[i]);
        s.suspension_of = odd[i];
        db.declare(s);
        db.assert_fact({even[i], Inv::compl_}, {2, kNoBound}, "estimator");
    }
    return db;
}

}  // namespace

TEST_CASE("rule catalog lists seventeen stable identifiers") {
    const auto& cat = rule_catalog();
    REQUIRE(cat.size() == 17);
    for (size_t i = 0; i < cat.size(); ++i) {
        CHECK(cat[i].id == "R" + std::to_string(i + 1));
        CHECK(!cat[i].summary.empty());
    }
    CHECK(known_rule("R9"));
    CHECK_FALSE(known_rule("R18"));
    CHECK_FALSE(known_rule("fact"));
}

TEST_CASE("invariant names round trip and split by kind") {
    for (Inv inv : {Inv::secat, Inv::relcat, Inv::Pushcat, Inv::Relcat,
                    Inv::compl_map, Inv::cat_map, Inv::cat, Inv::Cat,
                    Inv::compl_, Inv::relcompl, Inv::Pushcompl, Inv::Compl}) {
        auto back = inv_from_name(inv_name(inv));
        REQUIRE(back.has_value());
        CHECK(*back == inv);
    }
    CHECK(*inv_from_name("compl") == Inv::compl_);
    CHECK_FALSE(inv_from_name("width").has_value());
    CHECK(inv_on_objects(Inv::cat));
    CHECK(inv_on_objects(Inv::Compl));
    CHECK_FALSE(inv_on_objects(Inv::secat));
    CHECK_FALSE(inv_on_objects(Inv::compl_map));
}

TEST_CASE("declare validates endpoints and keeps relations acyclic") {
    BoundsDb db;
    db.declare(object_entity("x"));
    CHECK_THROWS_AS(db.declare(object_entity("x")), BoundsError);
    CHECK_THROWS_AS(db.declare(map_entity("m", "x", "nowhere")), BoundsError);
    CHECK_THROWS_AS(db.declare(object_entity("bad label")), BoundsError);

    // Referencing a label before it is declared fails, so in particular no
    // entity can take part in a relation cycle.
    Entity c = object_entity("c");
    c.cofibre_of = "c";
    CHECK_THROWS_AS(db.declare(c), BoundsError);

    Entity o = object_entity("y");
    o.fibre_of = "m";
    CHECK_THROWS_AS(db.declare(o), BoundsError);

    db.declare(object_entity("a"));
    db.declare(map_entity("f", "a", "x"));
    // A fibre inclusion of f must end at the source of f, here a.
    Entity g = map_entity("g", "a", "x");
    g.fibre_of = "f";
    CHECK_THROWS_AS(db.declare(g), BoundsError);
    Entity ok = map_entity("incl", "x", "a");
    ok.fibre_of = "f";
    db.declare(ok);
    CHECK(db.declared("incl"));
}

TEST_CASE("fact free keys stay at the trivial interval") {
    BoundsDb db;
    db.declare(object_entity("a"));
    db.declare(object_entity("x"));
    db.declare(map_entity("m", "a", "x"));
    db.propagate();
    check_iv(db, {"m", Inv::secat}, 0, kNoBound);
    check_iv(db, {"m", Inv::cat_map}, 0, kNoBound);
    check_iv(db, {"x", Inv::cat}, 0, kNoBound);

    CHECK_THROWS_AS(db.interval({"nowhere", Inv::cat}), UnknownKeyError);
    CHECK_THROWS_AS(db.query({"m", Inv::cat}), UnknownKeyError);
    CHECK_THROWS_AS(db.query({"x", Inv::relcat}), UnknownKeyError);
    CHECK_THROWS_AS(db.assert_fact({"q", Inv::secat}, {0, 1}, "s"),
                    UnknownKeyError);
}

TEST_CASE("asserting an empty interval is rejected") {
    BoundsDb db;
    db.declare(object_entity("x"));
    std::string msg = thrown([&] {
        db.assert_fact({"x", Inv::cat}, {3, 2}, "typo");
    });
    CHECK(has(msg, "empty interval"));
    CHECK(has(msg, "cat(x)"));
}

TEST_CASE("attachment with a category jump pins secat and relcat") {
    BoundsDb db = hopf_db();
    auto rep = db.propagate();
    CHECK(rep.rounds >= 1);
    check_iv(db, {"h", Inv::secat}, 1, 1);
    check_iv(db, {"h", Inv::relcat}, 2, 2);
    check_iv(db, {"h", Inv::Pushcat}, 2, 2);
    check_iv(db, {"h", Inv::Relcat}, 2, 2);
    check_iv(db, {"h", Inv::cat_map}, 0, 1);

    // The derivation tree names the owning rules: the relcat floor comes
    // from the cofibre bound, the ceiling from the category jump equality.
    BoundsDb::Query q = db.query({"h", Inv::relcat});
    REQUIRE(q.tree.size() >= 2);
    CHECK(q.tree[0].rule == "R4");
    CHECK(q.tree[0].side == Derivation::Side::lo);
    CHECK(q.tree[1].rule == "R8");
    CHECK(q.tree[1].side == Derivation::Side::hi);

    BoundsDb::Query qs = db.query({"h", Inv::secat});
    REQUIRE(qs.tree.size() >= 2);
    CHECK(qs.tree[0].rule == "R8");
    CHECK(qs.tree[1].rule == "R11");

    // A second pass finds nothing new, and further declarations extend the
    // same fixpoint.
    CHECK(db.propagate().tightenings == 0);
    db.declare(object_entity("g1"));
    Entity al = map_entity("alpha1", "s3", "g1");
    al.ganea_alpha_of = "h";
    al.ganea_alpha_index = 1;
    db.declare(al);
    db.propagate();
    check_iv(db, {"alpha1", Inv::relcat}, 1, 1);
    db.check_consistency();
}

TEST_CASE("diagonal estimate meets the product category bound") {
    BoundsDb db = diag_db();
    db.propagate();
    check_iv(db, {"iota", Inv::compl_map}, 2, 2);
    check_iv(db, {"s4", Inv::compl_}, 2, 2);
    CHECK(db.interval({"s4", Inv::cat}).contains(1));
    CHECK(db.interval({"s4", Inv::cat}).hi == 2);
    db.check_consistency();
}

TEST_CASE("suspension cap and estimator floor pin Compl of even spheres") {
    BoundsDb db = sphere_db();
    db.propagate();
    for (const char* s : {"s2", "s4", "s6"}) {
        check_iv(db, {s, Inv::Compl}, 2, 2);
        check_iv(db, {s, Inv::compl_}, 2, 2);
        check_iv(db, {s, Inv::relcompl}, 2, 2);
        check_iv(db, {s, Inv::Pushcompl}, 2, 2);
    }
    db.check_consistency();
}

TEST_CASE("every rule fires on a minimal scenario") {
    SUBCASE("R1 wraps the four relative invariants and cat with Cat") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        db.declare(map_entity("m", "a", "x"));
        db.assert_fact({"m", Inv::secat}, {1, 1}, "t");
        db.assert_fact({"x", Inv::cat}, {2, 2}, "t");
        db.propagate();
        check_iv(db, {"m", Inv::relcat}, 1, 2);
        check_iv(db, {"m", Inv::Relcat}, 1, 2);
        check_iv(db, {"x", Inv::Cat}, 2, 3);
        CHECK(fired_at(db, "R1", {"m", Inv::Relcat}));
    }
    SUBCASE("R2 compares dominated maps, relcat only in relative mode") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        db.declare(object_entity("y"));
        db.declare(map_entity("f", "a", "x"));
        Entity simple = map_entity("m", "a", "y");
        simple.dominated_by = "f";
        db.declare(simple);
        Entity rel = map_entity("m2", "a", "y");
        rel.dominated_by = "f";
        rel.domination = Entity::Domination::relative;
        db.declare(rel);
        db.assert_fact({"f", Inv::secat}, {1, 1}, "t");
        db.assert_fact({"f", Inv::relcat}, {1, 1}, "t");
        db.propagate();
        CHECK(db.interval({"m", Inv::secat}).hi == 1);
        CHECK(db.interval({"m", Inv::relcat}).hi == 2);   // via R1 only
        CHECK(db.interval({"m2", Inv::relcat}).hi == 1);  // via R2
        CHECK(fired(db, "R2"));
    }
    SUBCASE("R3 caps relcat of a cobase change but never secat") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        db.declare(object_entity("b"));
        db.declare(object_entity("xb"));
        db.declare(map_entity("i", "a", "x"));
        db.declare(map_entity("g", "a", "b"));
        Entity k = map_entity("k", "b", "xb");
        k.pushout_of = "i";
        k.pushout_along = "g";
        db.declare(k);
        db.assert_fact({"i", Inv::secat}, {0, 0}, "t");
        db.propagate();
        // relcat of i is still free in [0, 1], so the cobase change may
        // reach secat 1 even though secat(i) = 0.
        CHECK(db.interval({"k", Inv::relcat}).hi == 1);
        CHECK(db.interval({"k", Inv::secat}).hi == 1);
        CHECK(fired_at(db, "R3", {"k", Inv::Relcat}));
    }
    SUBCASE("R4 floors relcat by the category of the cofibre") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        db.declare(map_entity("q", "a", "x"));
        Entity c = object_entity("c");
        c.cofibre_of = "q";
        db.declare(c);
        db.assert_fact({"c", Inv::cat}, {2, 2}, "t");
        db.propagate();
        CHECK(db.interval({"q", Inv::relcat}).lo == 2);
        CHECK(db.interval({"q", Inv::Relcat}).lo == 2);
        CHECK(fired_at(db, "R4", {"q", Inv::relcat}));
        CHECK_FALSE(fired(db, "R8"));  // no gate: cat(x) is unknown
    }
    SUBCASE("R5 caps a fibre inclusion by the category of the base") {
        BoundsDb db;
        db.declare(object_entity("e"));
        db.declare(object_entity("b"));
        db.declare(object_entity("fo"));
        db.declare(map_entity("f", "e", "b"));
        Entity m = map_entity("m", "fo", "e");
        m.fibre_of = "f";
        db.declare(m);
        db.assert_fact({"b", Inv::cat}, {1, 1}, "t");
        db.propagate();
        CHECK(db.interval({"m", Inv::relcat}).hi == 1);
        CHECK(db.interval({"m", Inv::Relcat}).hi == 2);
        CHECK(fired_at(db, "R5", {"m", Inv::relcat}));
    }
    SUBCASE("R5 also caps relcat along a base change") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        db.declare(object_entity("b"));
        db.declare(object_entity("pb"));
        db.declare(map_entity("i", "a", "x"));
        db.declare(map_entity("g", "b", "x"));
        Entity m = map_entity("m", "pb", "b");
        m.pullback_of = "i";
        m.pullback_along = "g";
        db.declare(m);
        db.assert_fact({"i", Inv::relcat}, {0, 0}, "t");
        db.propagate();
        CHECK(db.interval({"m", Inv::relcat}).hi == 0);
        CHECK(fired_at(db, "R5", {"m", Inv::relcat}));
    }
    SUBCASE("R6 caps Relcat of a cofibre projection at one") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        db.declare(object_entity("c"));
        db.declare(map_entity("q", "a", "x"));
        Entity p = map_entity("p", "x", "c");
        p.cofibre_of = "q";
        db.declare(p);
        db.propagate();
        check_iv(db, {"p", Inv::Relcat}, 0, 1);
        CHECK(db.interval({"p", Inv::relcat}).hi == 1);
        CHECK(fired_at(db, "R6", {"p", Inv::Relcat}));
    }
    SUBCASE("R7 lets a cone attachment raise the invariants by one") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        db.declare(object_entity("c"));
        db.declare(map_entity("i", "a", "x"));
        Entity mc = map_entity("mc", "a", "c");
        mc.cone_of = "i";
        db.declare(mc);
        Entity mcs = map_entity("mcs", "a", "c");
        mcs.cone_of = "i";
        mcs.cone_sectioned = true;
        db.declare(mcs);
        db.assert_fact({"i", Inv::relcat}, {0, 0}, "t");
        db.propagate();
        CHECK(db.interval({"mc", Inv::relcat}).hi == 1);
        CHECK(db.interval({"mc", Inv::Pushcat}).hi == 2);
        CHECK(db.interval({"mcs", Inv::Relcat}).hi == 2);
        CHECK(fired_at(db, "R7", {"mcs", Inv::Relcat}));
        CHECK_FALSE(fired_at(db, "R7", {"mc", Inv::Relcat}));
    }
    SUBCASE("R8 realizes the category jump equalities") {
        BoundsDb db = hopf_db();
        db.propagate();
        CHECK(fired_at(db, "R8", {"h", Inv::secat}));
        CHECK(fired_at(db, "R8", {"h", Inv::relcat}));
    }
    SUBCASE("R9 evaluates stage maps through min formulas") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        db.declare(object_entity("g1"));
        db.declare(object_entity("f1"));
        db.declare(map_entity("i", "a", "x"));
        Entity al = map_entity("al", "a", "g1");
        al.ganea_alpha_of = "i";
        al.ganea_alpha_index = 1;
        db.declare(al);
        Entity be = map_entity("be", "f1", "g1");
        be.ganea_beta_of = "i";
        be.ganea_beta_index = 1;
        db.declare(be);
        db.assert_fact({"i", Inv::relcat}, {2, 2}, "t");
        db.propagate();
        check_iv(db, {"al", Inv::relcat}, 1, 1);
        check_iv(db, {"al", Inv::secat}, 1, 1);
        check_iv(db, {"be", Inv::secat}, 1, 1);
        check_iv(db, {"be", Inv::relcat}, 2, 2);
        CHECK(fired(db, "R9"));

        // The min formula also transports information back to the map.
        BoundsDb db2;
        db2.declare(object_entity("a"));
        db2.declare(object_entity("x"));
        db2.declare(object_entity("g2"));
        db2.declare(map_entity("i", "a", "x"));
        Entity a2 = map_entity("al2", "a", "g2");
        a2.ganea_alpha_of = "i";
        a2.ganea_alpha_index = 2;
        db2.declare(a2);
        db2.assert_fact({"al2", Inv::relcat}, {1, 1}, "t");
        db2.propagate();
        check_iv(db2, {"i", Inv::relcat}, 1, 1);
    }
    SUBCASE("R10 makes secat monotone under base change, exact when split") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        db.declare(object_entity("b"));
        db.declare(object_entity("pb"));
        db.declare(map_entity("i", "a", "x"));
        Entity g = map_entity("g", "b", "x");
        g.has_section = true;
        db.declare(g);
        Entity m = map_entity("m", "pb", "b");
        m.pullback_of = "i";
        m.pullback_along = "g";
        db.declare(m);
        db.assert_fact({"i", Inv::secat}, {1, 1}, "t");
        db.propagate();
        CHECK(db.interval({"m", Inv::secat}).hi == 1);
        CHECK(fired_at(db, "R10", {"m", Inv::secat}));

        BoundsDb db2;
        db2.declare(object_entity("a"));
        db2.declare(object_entity("x"));
        db2.declare(object_entity("b"));
        db2.declare(object_entity("pb"));
        db2.declare(map_entity("i", "a", "x"));
        Entity g2 = map_entity("g", "b", "x");
        g2.has_section = true;
        db2.declare(g2);
        Entity m2 = map_entity("m", "pb", "b");
        m2.pullback_of = "i";
        m2.pullback_along = "g";
        db2.declare(m2);
        db2.assert_fact({"m", Inv::secat}, {0, 0}, "t");
        db2.propagate();
        CHECK(db2.interval({"i", Inv::secat}).hi == 0);
    }
    SUBCASE("R11 caps secat by the target category, never relcat") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        db.declare(map_entity("m", "a", "x"));
        db.assert_fact({"x", Inv::cat}, {1, 1}, "t");
        db.propagate();
        CHECK(db.interval({"m", Inv::secat}).hi == 1);
        // relcat may exceed the target category by one; a cap at 1 here
        // would be the unsound variant this engine must never encode.
        CHECK(db.interval({"m", Inv::relcat}).hi == 2);
        CHECK(db.interval({"m", Inv::Relcat}).hi == 2);
        CHECK(fired_at(db, "R11", {"m", Inv::secat}));
    }
    SUBCASE("R11 lowers secat across a factorization") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("b"));
        db.declare(object_entity("x"));
        db.declare(map_entity("chi", "b", "x"));
        Entity m = map_entity("m", "a", "x");
        m.factors_through = "chi";
        db.declare(m);
        db.assert_fact({"m", Inv::secat}, {0, 0}, "t");
        db.propagate();
        CHECK(db.interval({"chi", Inv::secat}).hi == 0);
        CHECK(fired_at(db, "R11", {"chi", Inv::secat}));
    }
    SUBCASE("R12 bounds cat of a map and equates it with fibre secat") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        db.declare(map_entity("m", "a", "x"));
        db.assert_fact({"a", Inv::cat}, {1, 1}, "t");
        db.assert_fact({"x", Inv::cat}, {3, 3}, "t");
        db.propagate();
        CHECK(db.interval({"m", Inv::cat_map}).hi == 1);
        CHECK(fired_at(db, "R12", {"m", Inv::cat_map}));

        BoundsDb db2;
        db2.declare(object_entity("e"));
        db2.declare(object_entity("b"));
        db2.declare(object_entity("fo"));
        db2.declare(map_entity("f", "e", "b"));
        Entity incl = map_entity("incl", "fo", "e");
        incl.fibre_of = "f";
        db2.declare(incl);
        db2.assert_fact({"incl", Inv::secat}, {2, 2}, "t");
        db2.propagate();
        check_iv(db2, {"f", Inv::cat_map}, 2, 2);
    }
    SUBCASE("R13 identifies the diagonal invariants with the compl family") {
        BoundsDb db;
        db.declare(object_entity("x"));
        Entity p = object_entity("xx");
        p.product_of = {"x", "x"};
        db.declare(p);
        Entity d = map_entity("d", "x", "xx");
        d.diagonal_of = "x";
        d.diagonal_arity = 2;
        db.declare(d);
        db.assert_fact({"d", Inv::secat}, {2, 2}, "t");
        db.propagate();
        check_iv(db, {"x", Inv::compl_}, 2, 2);
        CHECK(db.interval({"x", Inv::cat}).hi == 2);
        CHECK(db.interval({"xx", Inv::cat}).lo == 2);  // compl(x) <= cat(xx)
        CHECK(db.interval({"x", Inv::Compl}).lo == 2);
        CHECK(fired(db, "R13"));
        db.check_consistency();
    }
    SUBCASE("R14 wraps the four complexity invariants") {
        BoundsDb db;
        db.declare(object_entity("x"));
        db.assert_fact({"x", Inv::relcompl}, {1, 2}, "t");
        db.propagate();
        check_iv(db, {"x", Inv::compl_}, 0, 2);
        check_iv(db, {"x", Inv::Pushcompl}, 1, 3);
        CHECK(db.interval({"x", Inv::Compl}).lo == 1);
        CHECK(fired(db, "R14"));
    }
    SUBCASE("R15 floors Compl by Cat, also through the diagonal") {
        BoundsDb db;
        db.declare(object_entity("x"));
        Entity p = object_entity("xx");
        p.product_of = {"x", "x"};
        db.declare(p);
        Entity d = map_entity("d", "x", "xx");
        d.diagonal_of = "x";
        d.diagonal_arity = 2;
        db.declare(d);
        db.assert_fact({"x", Inv::Cat}, {2, 2}, "t");
        db.propagate();
        CHECK(db.interval({"x", Inv::Compl}).lo == 2);
        CHECK(db.interval({"d", Inv::Relcat}).lo == 2);
        CHECK(fired(db, "R15"));
    }
    SUBCASE("R16 caps Compl of a suspension at two") {
        BoundsDb db;
        db.declare(object_entity("y"));
        Entity s = object_entity("sy");
        s.suspension_of = "y";
        db.declare(s);
        db.propagate();
        CHECK(db.interval({"sy", Inv::Compl}).hi == 2);
        CHECK(db.interval({"sy", Inv::compl_}).hi == 2);
        CHECK(db.interval({"sy", Inv::Cat}).hi == 2);
        CHECK(fired_at(db, "R16", {"sy", Inv::Compl}));
    }
    SUBCASE("R17 kills the section family but not cat or compl of a map") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        Entity e = map_entity("e", "a", "x");
        e.is_equivalence = true;
        db.declare(e);
        Entity s = map_entity("s", "a", "x");
        s.has_section = true;
        db.declare(s);
        db.assert_fact({"x", Inv::cat}, {1, 1}, "t");
        db.propagate();
        for (Inv inv : {Inv::secat, Inv::relcat, Inv::Pushcat, Inv::Relcat})
            check_iv(db, {"e", inv}, 0, 0);
        CHECK(db.interval({"e", Inv::cat_map}).hi == 1);
        CHECK(db.interval({"e", Inv::compl_map}).lo == 1);
        check_iv(db, {"s", Inv::secat}, 0, 0);
        check_iv(db, {"s", Inv::relcat}, 0, 1);
        CHECK(fired_at(db, "R17", {"s", Inv::secat}));
        CHECK_FALSE(fired_at(db, "R17", {"e", Inv::cat_map}));
    }
}

TEST_CASE("disabling rules widens exactly what they carried") {
    SUBCASE("the category jump equality is redundant on these facts") {
        // The floor comes from the cofibre bound and the ceiling from the
        // chain wrap, so removing the equality changes nothing.
        BoundsDb db = hopf_db();
        db.disable_rule("R8");
        db.propagate();
        check_iv(db, {"h", Inv::secat}, 1, 1);
        check_iv(db, {"h", Inv::relcat}, 2, 2);
        CHECK_FALSE(fired(db, "R8"));
    }
    SUBCASE("removing the cofibre floor as well loses the lower bounds") {
        BoundsDb db = hopf_db();
        db.disable_rule("R8");
        db.disable_rule("R4");
        db.propagate();
        check_iv(db, {"h", Inv::secat}, 0, 1);
        check_iv(db, {"h", Inv::relcat}, 0, 2);
    }
    SUBCASE("without the suspension cap the upper bound is open") {
        BoundsDb db = sphere_db();
        db.disable_rule("R16");
        db.propagate();
        check_iv(db, {"s2", Inv::Compl}, 2, kNoBound);
    }
    SUBCASE("without the chain wrap nothing ties relcat to secat") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        db.declare(map_entity("m", "a", "x"));
        db.assert_fact({"m", Inv::secat}, {1, 1}, "t");
        BoundsDb off = db;
        db.propagate();
        check_iv(db, {"m", Inv::relcat}, 1, 2);
        off.disable_rule("R1");
        off.propagate();
        check_iv(off, {"m", Inv::relcat}, 0, kNoBound);
    }
    SUBCASE("unknown identifiers are rejected") {
        BoundsDb db;
        CHECK_THROWS_AS(db.disable_rule("R99"), BoundsError);
    }
}

TEST_CASE("conflicts carry the derivations behind both bounds") {
    SUBCASE("asserting against a propagated floor names the floor rule") {
        BoundsDb db = hopf_db();
        db.propagate();
        std::string msg = thrown([&] {
            db.assert_fact({"h", Inv::relcat}, {0, 0}, "poison");
        });
        CHECK(has(msg, "INCONSISTENT"));
        CHECK(has(msg, "relcat(h)"));
        CHECK(has(msg, "poison"));
        CHECK(has(msg, "R4"));
    }
    SUBCASE("a rule firing into an asserted ceiling reports the same") {
        BoundsDb db = hopf_db();
        db.assert_fact({"h", Inv::relcat}, {0, 0}, "poison");
        std::string msg = thrown([&] { db.propagate(); });
        CHECK(has(msg, "INCONSISTENT"));
        CHECK(has(msg, "R4"));
        CHECK(has(msg, "poison"));
    }
    SUBCASE("two facts that cannot meet cite both sources") {
        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        db.declare(map_entity("m", "a", "x"));
        db.assert_fact({"m", Inv::secat}, {0, 1}, "alpha-source");
        std::string msg = thrown([&] {
            db.assert_fact({"m", Inv::secat}, {2, 5}, "beta-source");
        });
        CHECK(has(msg, "alpha-source"));
        CHECK(has(msg, "beta-source"));
    }
}

namespace {

// One database exercising every relation at once, with jointly satisfiable
// facts. Used for the schedule independence suite.
BoundsDb rich_db() {
    BoundsDb db;
    db.declare(object_entity("s3"));
    db.declare(object_entity("s2"));
    db.declare(map_entity("h", "s3", "s2"));
    {
        Entity c = object_entity("cp2");
        c.cofibre_of = "h";
        db.declare(c);
    }
    db.assert_fact({"s2", Inv::cat}, {1, 1}, "golden");
    db.assert_fact({"cp2", Inv::cat}, {2, 2}, "golden");

    db.declare(object_entity("cp3"));
    db.declare(object_entity("s4"));
    {
        Entity p = object_entity("s4xs4");
        p.product_of = {"s4", "s4"};
        db.declare(p);
    }
    db.declare(map_entity("iota", "cp3", "s4"));
    db.assert_fact({"s4xs4", Inv::cat}, {2, 2}, "golden");
    db.assert_fact({"iota", Inv::compl_map}, {2, kNoBound}, "estimator");

    db.declare(object_entity("e1"));
    {
        Entity s = object_entity("e2");
        s.suspension_of = "e1";
        db.declare(s);
    }
    db.assert_fact({"e2", Inv::compl_}, {2, kNoBound}, "estimator");

    db.declare(object_entity("g1h"));
    db.declare(object_entity("f1h"));
    {
        Entity al = map_entity("alpha1", "s3", "g1h");
        al.ganea_alpha_of = "h";
        al.ganea_alpha_index = 1;
        db.declare(al);
    }
    {
        Entity be = map_entity("beta1", "f1h", "g1h");
        be.ganea_beta_of = "h";
        be.ganea_beta_index = 1;
        db.declare(be);
    }
    db.declare(object_entity("fh"));
    {
        Entity fi = map_entity("fibh", "fh", "s3");
        fi.fibre_of = "h";
        db.declare(fi);
    }
    db.declare(object_entity("bo"));
    db.declare(object_entity("pb"));
    {
        Entity g = map_entity("gmap", "bo", "s4");
        g.has_section = true;
        db.declare(g);
    }
    {
        Entity m = map_entity("pulliota", "pb", "bo");
        m.pullback_of = "iota";
        m.pullback_along = "gmap";
        db.declare(m);
    }
    db.declare(object_entity("ct"));
    {
        Entity mc = map_entity("hcone", "s3", "ct");
        mc.cone_of = "h";
        mc.cone_sectioned = true;
        db.declare(mc);
    }
    db.declare(object_entity("bb"));
    db.declare(object_entity("xb"));
    db.declare(map_entity("gg", "cp3", "bb"));
    {
        Entity k = map_entity("kap", "bb", "xb");
        k.pushout_of = "iota";
        k.pushout_along = "gg";
        db.declare(k);
    }
    {
        Entity d = map_entity("dom", "s3", "cp2");
        d.dominated_by = "h";
        d.domination = Entity::Domination::relative;
        db.declare(d);
    }
    db.declare(object_entity("ch"));
    {
        Entity p = map_entity("proj", "s2", "ch");
        p.cofibre_of = "h";
        db.declare(p);
    }
    {
        Entity p = object_entity("s2xs2");
        p.product_of = {"s2", "s2"};
        db.declare(p);
    }
    {
        Entity d = map_entity("diag2", "s2", "s2xs2");
        d.diagonal_of = "s2";
        d.diagonal_arity = 2;
        db.declare(d);
    }
    {
        Entity f = map_entity("hfac", "s3", "s2");
        f.factors_through = "h";
        db.declare(f);
    }
    {
        Entity e = map_entity("eq", "s3", "s3");
        e.is_equivalence = true;
        db.declare(e);
    }
    return db;
}

}  // namespace

TEST_CASE("the fixpoint does not depend on the firing schedule") {
    BoundsDb base = rich_db();
    base.propagate();
    base.check_consistency();
    check_iv(base, {"h", Inv::secat}, 1, 1);
    check_iv(base, {"alpha1", Inv::relcat}, 1, 1);
    check_iv(base, {"beta1", Inv::relcat}, 2, 2);
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u, 9u, 10u}) {
        BoundsDb shuffled = rich_db();
        shuffled.propagate_shuffled(seed);
        shuffled.check_consistency();
        CHECK(shuffled.state_signature() == base.state_signature());
    }
}

TEST_CASE("propagated intervals contain the exact tower values") {
    std::mt19937 rng(904);
    const int cap = 3;
    for (int k = 0; k < 8; ++k) {
        ChainBackend H;
        ObjRef a = props::small_object(H, rng);
        ObjRef x = props::small_object(H, rng);
        MapRef f = props::map_between(H, rng, a, x);

        InvariantResult se = secat::secat(H, f, cap);
        InvariantResult re = secat::relcat(H, f, cap);
        CofibreResult cof = cofibre(H, f);

        BoundsDb db;
        db.declare(object_entity("a"));
        db.declare(object_entity("x"));
        Entity m = map_entity("f", "a", "x");
        m.is_equivalence = H.is_equivalence(f);
        if (!se.over_cap && se.value == 0) m.has_section = true;
        db.declare(m);
        {
            Entity c = object_entity("c");
            c.cofibre_of = "f";
            db.declare(c);
        }
        {
            Entity p = map_entity("p", "x", "c");
            p.cofibre_of = "f";
            db.declare(p);
        }
        auto put = [&](const Key& key, const InvariantResult& r) {
            if (!r.over_cap)
                db.assert_fact(key, {r.value, r.value}, "oracle");
            else
                db.assert_fact(key, {r.cap + 1, kNoBound}, "oracle");
        };
        put({"a", Inv::cat}, cat_obj(H, a, cap));
        put({"x", Inv::cat}, cat_obj(H, x, cap));
        put({"c", Inv::cat}, cat_obj(H, cof.obj, cap));
        db.propagate();
        db.check_consistency();

        auto inside = [&](const Key& key, const InvariantResult& r) {
            if (r.over_cap) return;
            std::string where = key_text(key) + " = " +
                                std::to_string(r.value) + " outside " +
                                interval_text(db.interval(key));
            CHECK_MESSAGE(db.interval(key).contains(r.value), where);
        };
        inside({"f", Inv::secat}, se);
        inside({"f", Inv::relcat}, re);
        inside({"f", Inv::cat_map}, cat_map(H, f, cap));
        inside({"f", Inv::compl_map}, compl_map(H, f, cap));
        inside({"p", Inv::secat}, secat::secat(H, cof.proj, cap));
        inside({"p", Inv::relcat}, secat::relcat(H, cof.proj, cap));
        if (k < 3) {
            StrongInterval pc = pushcat_interval(H, f, cap);
            if (pc.is_point())
                CHECK(db.interval({"f", Inv::Pushcat})
                          .contains(static_cast<int>(pc.lo)));
            StrongInterval rc = relcat_interval(H, f, cap);
            if (rc.is_point())
                CHECK(db.interval({"f", Inv::Relcat})
                          .contains(static_cast<int>(rc.lo)));
        }
    }
}
