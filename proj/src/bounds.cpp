#include "secat/bounds.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace secat {

namespace {

constexpr int kMaxRounds = 10000;

// Bound arithmetic saturating at kNoBound. Upper bounds may go negative
// (the conflict check catches that); lower bounds clamp at 0 because the
// invariants are nonnegative and a negative lower bound carries no content.
int sat_add(int a, int c) {
    if (a == kNoBound) return kNoBound;
    long s = static_cast<long>(a) + c;
    return s >= kNoBound ? kNoBound : static_cast<int>(s);
}

int sat_sub_floor(int a, int c) {
    if (a == kNoBound) return kNoBound;
    return std::max(0, a - c);
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw BoundsError(msg);
}

}  // namespace

const char* inv_name(Inv inv) {
    switch (inv) {
        case Inv::secat: return "secat";
        case Inv::relcat: return "relcat";
        case Inv::Pushcat: return "Pushcat";
        case Inv::Relcat: return "Relcat";
        case Inv::compl_map: return "compl_map";
        case Inv::cat_map: return "cat_map";
        case Inv::cat: return "cat";
        case Inv::Cat: return "Cat";
        case Inv::compl_: return "compl";
        case Inv::relcompl: return "relcompl";
        case Inv::Pushcompl: return "Pushcompl";
        case Inv::Compl: return "Compl";
    }
    return "?";
}

std::optional<Inv> inv_from_name(const std::string& name) {
    static const std::vector<Inv> all = {
        Inv::secat,   Inv::relcat, Inv::Pushcat, Inv::Relcat,
        Inv::compl_map, Inv::cat_map, Inv::cat,  Inv::Cat,
        Inv::compl_,  Inv::relcompl, Inv::Pushcompl, Inv::Compl,
    };
    for (Inv inv : all)
        if (name == inv_name(inv)) return inv;
    return std::nullopt;
}

bool inv_on_objects(Inv inv) {
    switch (inv) {
        case Inv::cat:
        case Inv::Cat:
        case Inv::compl_:
        case Inv::relcompl:
        case Inv::Pushcompl:
        case Inv::Compl: return true;
        default: return false;
    }
}

std::string interval_text(const Interval& iv) {
    std::string hi = iv.hi == kNoBound ? "inf" : std::to_string(iv.hi);
    return "[" + std::to_string(iv.lo) + ", " + hi + "]";
}

std::string key_text(const Key& k) {
    return std::string(inv_name(k.inv)) + "(" + k.entity + ")";
}

Entity object_entity(std::string label) {
    Entity e;
    e.kind = Entity::Kind::object;
    e.label = std::move(label);
    return e;
}

Entity map_entity(std::string label, std::string src, std::string tgt) {
    Entity e;
    e.kind = Entity::Kind::map;
    e.label = std::move(label);
    e.src = std::move(src);
    e.tgt = std::move(tgt);
    return e;
}

const std::vector<RuleInfo>& rule_catalog() {
    static const std::vector<RuleInfo> catalog = {
        {"R1",
         "secat <= relcat <= Pushcat <= Relcat <= secat + 1 on maps; "
         "cat <= Cat <= cat + 1 on objects"},
        {"R2",
         "a dominated map has secat at most that of the dominating map; "
         "relative dominations compare relcat as well"},
        {"R3", "a cobase change never raises relcat or Relcat"},
        {"R4",
         "the cofibre C of q satisfies cat(C) <= relcat(q) and "
         "Cat(C) <= Relcat(q)"},
        {"R5",
         "a fibre inclusion over B has relcat <= cat(B) and Relcat <= Cat(B); "
         "a base change never raises relcat or Relcat"},
        {"R6", "a cofibre projection has Relcat <= 1"},
        {"R7",
         "attaching a cone raises relcat and Pushcat by at most 1; "
         "when the attaching retraction has a section, Relcat as well"},
        {"R8",
         "if C is the cofibre of q and cat(tgt q) < cat(C) then "
         "secat(q) = cat(tgt q) and relcat(q) = cat(C) = cat(tgt q) + 1"},
        {"R9",
         "stage maps of the Ganea tower of iota: relcat(alpha_i) = "
         "min(i, relcat(iota)), secat(alpha_i) >= min(i, secat(iota)), "
         "secat(beta_i) = min(i, secat(iota)), relcat(beta_i) = "
         "min(i + 1, relcat(iota))"},
        {"R10",
         "a base change never raises secat; when the map changed along "
         "has a section, secat is preserved"},
        {"R11",
         "secat(m) <= cat(tgt m); if m factors through chi then "
         "secat(chi) <= secat(m)"},
        {"R12",
         "cat_map(f) equals secat of the fibre inclusion of f and is at "
         "most cat of the source and of the target"},
        {"R13",
         "the complexity family consists of the invariants of the diagonal; "
         "cat(X) <= compl(X) <= cat(X x X), cat(tgt m) <= compl_map(m) <= "
         "compl(tgt m), and powers bound diagonals from below"},
        {"R14", "compl <= relcompl <= Pushcompl <= Compl <= compl + 1"},
        {"R15",
         "Cat(X) <= Compl(X); Cat of a power bounds Relcat of the "
         "diagonal from below"},
        {"R16", "a suspension has Compl <= 2"},
        {"R17",
         "an equivalence has secat = relcat = Pushcat = Relcat = 0; "
         "a map with a section has secat = 0"},
    };
    return catalog;
}

bool known_rule(const std::string& id) {
    for (const RuleInfo& r : rule_catalog())
        if (r.id == id) return true;
    return false;
}

// Turns one declared relation into the interval tightenings it licenses.
// Every helper emits both directions of the stated (in)equality so that
// propagation is bidirectional.
struct BoundsDb::Emitter {
    std::vector<Tightening>& out;

    static std::string shifted(const Key& b, int shift) {
        std::string s = key_text(b);
        if (shift > 0) s += " + " + std::to_string(shift);
        return s;
    }

    // a <= b + shift
    void le(const std::string& rule, const Key& a, const Key& b,
            int shift = 0) {
        std::string note = key_text(a) + " <= " + shifted(b, shift);
        out.push_back({rule, note, a, Derivation::Side::hi, {b},
                       [shift](const std::vector<Interval>& p) {
                           return std::optional<int>(sat_add(p[0].hi, shift));
                       }});
        out.push_back({rule, note, b, Derivation::Side::lo, {a},
                       [shift](const std::vector<Interval>& p) {
                           return std::optional<int>(
                               sat_sub_floor(p[0].lo, shift));
                       }});
    }

    // a = b + shift
    void eq(const std::string& rule, const Key& a, const Key& b,
            int shift = 0) {
        le(rule, a, b, shift);
        // b <= a - shift
        std::string note = key_text(a) + " = " + shifted(b, shift);
        out.push_back({rule, note, b, Derivation::Side::hi, {a},
                       [shift](const std::vector<Interval>& p) {
                           return std::optional<int>(sat_add(p[0].hi, -shift));
                       }});
        out.push_back({rule, note, a, Derivation::Side::lo, {b},
                       [shift](const std::vector<Interval>& p) {
                           return std::optional<int>(sat_add(p[0].lo, shift));
                       }});
    }

    // a = b + shift, active only while glt.hi < ggt.lo stays certified.
    void gated_eq(const std::string& rule, const Key& glt, const Key& ggt,
                  const Key& a, const Key& b, int shift = 0) {
        std::string note = key_text(a) + " = " + shifted(b, shift) +
                           ", given " + key_text(glt) + " < " + key_text(ggt);
        auto gate = [](const std::vector<Interval>& p) {
            return p[0].hi < p[1].lo;
        };
        out.push_back({rule, note, a, Derivation::Side::hi, {glt, ggt, b},
                       [gate, shift](const std::vector<Interval>& p)
                           -> std::optional<int> {
                           if (!gate(p)) return std::nullopt;
                           return sat_add(p[2].hi, shift);
                       }});
        out.push_back({rule, note, a, Derivation::Side::lo, {glt, ggt, b},
                       [gate, shift](const std::vector<Interval>& p)
                           -> std::optional<int> {
                           if (!gate(p)) return std::nullopt;
                           return sat_add(p[2].lo, shift);
                       }});
        out.push_back({rule, note, b, Derivation::Side::hi, {glt, ggt, a},
                       [gate, shift](const std::vector<Interval>& p)
                           -> std::optional<int> {
                           if (!gate(p)) return std::nullopt;
                           return sat_add(p[2].hi, -shift);
                       }});
        out.push_back({rule, note, b, Derivation::Side::lo, {glt, ggt, a},
                       [gate, shift](const std::vector<Interval>& p)
                           -> std::optional<int> {
                           if (!gate(p)) return std::nullopt;
                           return sat_sub_floor(p[2].lo, shift);
                       }});
    }

    // x = min(c, y)
    void min_eq(const std::string& rule, const Key& x, int c, const Key& y) {
        std::string note = key_text(x) + " = min(" + std::to_string(c) +
                           ", " + key_text(y) + ")";
        out.push_back({rule, note, x, Derivation::Side::hi, {y},
                       [c](const std::vector<Interval>& p) {
                           return std::optional<int>(std::min(c, p[0].hi));
                       }});
        out.push_back({rule, note, x, Derivation::Side::lo, {y},
                       [c](const std::vector<Interval>& p) {
                           return std::optional<int>(std::min(c, p[0].lo));
                       }});
        out.push_back({rule, note, y, Derivation::Side::lo, {x},
                       [c](const std::vector<Interval>& p)
                           -> std::optional<int> {
                           if (p[0].lo > c) return std::nullopt;
                           return p[0].lo;
                       }});
        out.push_back({rule, note, y, Derivation::Side::hi, {x},
                       [c](const std::vector<Interval>& p)
                           -> std::optional<int> {
                           if (p[0].hi >= c) return std::nullopt;
                           return p[0].hi;
                       }});
    }

    // x >= min(c, y)
    void min_lower(const std::string& rule, const Key& x, int c,
                   const Key& y) {
        std::string note = key_text(x) + " >= min(" + std::to_string(c) +
                           ", " + key_text(y) + ")";
        out.push_back({rule, note, x, Derivation::Side::lo, {y},
                       [c](const std::vector<Interval>& p) {
                           return std::optional<int>(std::min(c, p[0].lo));
                       }});
        out.push_back({rule, note, y, Derivation::Side::hi, {x},
                       [c](const std::vector<Interval>& p)
                           -> std::optional<int> {
                           if (p[0].hi >= c) return std::nullopt;
                           return p[0].hi;
                       }});
    }

    void const_hi(const std::string& rule, const std::string& note,
                  const Key& a, int c) {
        out.push_back({rule, note, a, Derivation::Side::hi, {},
                       [c](const std::vector<Interval>&) {
                           return std::optional<int>(c);
                       }});
    }
};

void BoundsDb::declare(const Entity& entity_in) {
    Entity e = entity_in;
    require(!e.label.empty(), "entity label must be nonempty");
    for (char c : e.label)
        require(std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                    c == '-' || c == '.',
                "invalid character in label: " + e.label);
    require(!entities_.count(e.label), "duplicate label: " + e.label);

    auto known_object = [&](const std::string& l) {
        auto it = entities_.find(l);
        return it != entities_.end() && it->second.kind == Entity::Kind::object;
    };
    auto known_map = [&](const std::string& l) {
        auto it = entities_.find(l);
        return it != entities_.end() && it->second.kind == Entity::Kind::map;
    };
    auto the_map = [&](const std::string& l) -> const Entity& {
        require(known_map(l), e.label + ": undeclared map: " + l);
        return entities_.at(l);
    };

    if (e.kind == Entity::Kind::object) {
        require(e.src.empty() && e.tgt.empty(),
                "object " + e.label + " must not carry src/tgt");
        require(!e.is_equivalence && !e.has_section,
                "object " + e.label + " must not carry map attributes");
        if (!e.cofibre_of.empty()) the_map(e.cofibre_of);
        if (!e.suspension_of.empty())
            require(known_object(e.suspension_of),
                    e.label + ": undeclared object: " + e.suspension_of);
        if (!e.product_of.empty()) {
            require(e.product_of.size() >= 2,
                    e.label + ": a product needs at least two factors");
            for (const std::string& f : e.product_of)
                require(known_object(f), e.label + ": undeclared object: " + f);
        }
        require(e.fibre_of.empty() && e.diagonal_of.empty() &&
                    e.ganea_alpha_of.empty() && e.ganea_beta_of.empty() &&
                    e.dominated_by.empty() && e.pushout_of.empty() &&
                    e.factors_through.empty() && e.pullback_of.empty() &&
                    e.cone_of.empty(),
                "object " + e.label + " carries a map-only relation");
    } else {
        require(known_object(e.src),
                e.label + ": undeclared source object: " + e.src);
        require(known_object(e.tgt),
                e.label + ": undeclared target object: " + e.tgt);
        require(e.suspension_of.empty() && e.product_of.empty(),
                "map " + e.label + " carries an object-only relation");
        if (!e.cofibre_of.empty()) {
            const Entity& q = the_map(e.cofibre_of);
            require(q.tgt == e.src, e.label +
                        ": a cofibre projection starts at the target of " +
                        q.label);
        }
        if (!e.fibre_of.empty()) {
            const Entity& f = the_map(e.fibre_of);
            require(e.tgt == f.src, e.label +
                        ": a fibre inclusion ends at the source of " + f.label);
        }
        if (!e.diagonal_of.empty()) {
            require(known_object(e.diagonal_of),
                    e.label + ": undeclared object: " + e.diagonal_of);
            require(e.diagonal_arity >= 2,
                    e.label + ": diagonal arity must be at least 2");
            require(e.src == e.diagonal_of,
                    e.label + ": a diagonal starts at " + e.diagonal_of);
        }
        if (e.ganea_alpha_of.empty())
            require(e.ganea_alpha_index < 0,
                    e.label + ": stage index without a stage relation");
        else {
            const Entity& i = the_map(e.ganea_alpha_of);
            require(e.ganea_alpha_index >= 0,
                    e.label + ": stage index must be nonnegative");
            require(e.src == i.src, e.label +
                        ": a stage map alpha shares its source with " +
                        i.label);
        }
        if (e.ganea_beta_of.empty())
            require(e.ganea_beta_index < 0,
                    e.label + ": stage index without a stage relation");
        else {
            the_map(e.ganea_beta_of);
            require(e.ganea_beta_index >= 0,
                    e.label + ": stage index must be nonnegative");
        }
        if (!e.dominated_by.empty()) {
            const Entity& f = the_map(e.dominated_by);
            require(f.src == e.src,
                    e.label + ": a dominating map shares the source");
            if (e.domination == Entity::Domination::none)
                e.domination = Entity::Domination::simple;
        } else {
            require(e.domination == Entity::Domination::none,
                    e.label + ": domination mode without dominated_by");
        }
        require(e.pushout_of.empty() == e.pushout_along.empty(),
                e.label + ": a pushout relation needs both maps");
        if (!e.pushout_of.empty()) {
            const Entity& f = the_map(e.pushout_of);
            const Entity& g = the_map(e.pushout_along);
            require(f.src == g.src,
                    e.label + ": pushout legs must share their source");
            require(e.src == g.tgt, e.label +
                        ": a cobase change starts at the target of " + g.label);
        }
        if (!e.factors_through.empty()) {
            const Entity& chi = the_map(e.factors_through);
            require(chi.tgt == e.tgt,
                    e.label + ": factoring must preserve the target");
            if (!e.factors_via.empty()) {
                const Entity& u = the_map(e.factors_via);
                require(u.src == e.src && u.tgt == chi.src,
                        e.label + ": first factor must join the sources");
            }
        } else {
            require(e.factors_via.empty(),
                    e.label + ": factors_via without factors_through");
        }
        require(e.pullback_of.empty() == e.pullback_along.empty(),
                e.label + ": a pullback relation needs both maps");
        if (!e.pullback_of.empty()) {
            const Entity& i = the_map(e.pullback_of);
            const Entity& f = the_map(e.pullback_along);
            require(f.tgt == i.tgt,
                    e.label + ": pullback legs must share their target");
            require(e.tgt == f.src, e.label +
                        ": a base change ends at the source of " + f.label);
        }
        if (!e.cone_of.empty()) {
            const Entity& i = the_map(e.cone_of);
            require(e.src == i.src,
                    e.label + ": a cone attachment preserves the source");
        } else {
            require(!e.cone_sectioned,
                    e.label + ": cone_sectioned without cone_of");
        }
    }

    entities_.emplace(e.label, e);
    order_.push_back(e.label);
    materialize(e.label);
}

void BoundsDb::materialize(const std::string& label) {
    static const std::vector<Inv> object_invs = {
        Inv::cat, Inv::Cat, Inv::compl_, Inv::relcompl, Inv::Pushcompl,
        Inv::Compl};
    static const std::vector<Inv> map_invs = {
        Inv::secat, Inv::relcat, Inv::Pushcat, Inv::Relcat, Inv::compl_map,
        Inv::cat_map};
    const auto& invs = entities_.at(label).kind == Entity::Kind::object
                           ? object_invs
                           : map_invs;
    for (Inv inv : invs) {
        state_[{label, inv}] = Interval{};
        prov_[{label, inv}] = Prov{};
    }
}

const Entity& BoundsDb::checked_entity(const Key& k) const {
    auto it = entities_.find(k.entity);
    if (it == entities_.end())
        throw UnknownKeyError("unknown entity: " + k.entity);
    bool on_obj = it->second.kind == Entity::Kind::object;
    if (inv_on_objects(k.inv) != on_obj)
        throw UnknownKeyError("no such key: " + key_text(k) + " (" + k.entity +
                              (on_obj ? " is an object)" : " is a map)"));
    return it->second;
}

bool BoundsDb::declared(const std::string& label) const {
    return entities_.count(label) != 0;
}

const Entity& BoundsDb::entity(const std::string& label) const {
    auto it = entities_.find(label);
    require(it != entities_.end(), "unknown entity: " + label);
    return it->second;
}

void BoundsDb::assert_fact(const Key& k, Interval iv,
                           const std::string& source) {
    checked_entity(k);
    iv.lo = std::max(0, iv.lo);
    if (iv.lo > iv.hi)
        throw InconsistentError("INCONSISTENT: asserted empty interval " +
                                interval_text(iv) + " at " + key_text(k));
    Interval cur = state_.at(k);
    if (iv.lo > cur.lo) {
        Derivation d;
        d.rule = "fact";
        d.note = source;
        d.target = k;
        d.side = Derivation::Side::lo;
        d.bound = iv.lo;
        d.before = cur;
        if (iv.lo > cur.hi) conflict(k, std::move(d));
        cur.lo = iv.lo;
        d.after = cur;
        d.id = static_cast<int>(log_.size());
        prov_[k].lo = d.id;
        log_.push_back(std::move(d));
        state_[k] = cur;
    }
    if (iv.hi < cur.hi) {
        Derivation d;
        d.rule = "fact";
        d.note = source;
        d.target = k;
        d.side = Derivation::Side::hi;
        d.bound = iv.hi;
        d.before = cur;
        if (iv.hi < cur.lo) conflict(k, std::move(d));
        cur.hi = iv.hi;
        d.after = cur;
        d.id = static_cast<int>(log_.size());
        prov_[k].hi = d.id;
        log_.push_back(std::move(d));
        state_[k] = cur;
    }
}

void BoundsDb::disable_rule(const std::string& rule_id) {
    require(known_rule(rule_id), "unknown rule id: " + rule_id);
    disabled_.insert(rule_id);
}

void BoundsDb::compile_object(std::vector<Tightening>& out,
                              const Entity& e) const {
    Emitter em{out};
    Key kcat{e.label, Inv::cat}, kCat{e.label, Inv::Cat};
    Key kco{e.label, Inv::compl_}, krco{e.label, Inv::relcompl};
    Key kpco{e.label, Inv::Pushcompl}, kCo{e.label, Inv::Compl};

    em.le("R1", kcat, kCat);
    em.le("R1", kCat, kcat, 1);
    em.le("R13", kcat, kco);
    em.le("R14", kco, krco);
    em.le("R14", krco, kpco);
    em.le("R14", kpco, kCo);
    em.le("R14", kCo, kco, 1);
    em.le("R15", kCat, kCo);
    if (!e.suspension_of.empty())
        em.const_hi("R16",
                    "Compl(" + e.label + ") <= 2 since " + e.label +
                        " is a suspension",
                    kCo, 2);
    if (!e.cofibre_of.empty()) {
        const Entity& q = entities_.at(e.cofibre_of);
        Key qse{q.label, Inv::secat}, qre{q.label, Inv::relcat};
        Key qRe{q.label, Inv::Relcat};
        Key kbase{q.tgt, Inv::cat};
        em.le("R4", kcat, qre);
        em.le("R4", kCat, qRe);
        em.gated_eq("R8", kbase, kcat, qse, kbase);
        em.gated_eq("R8", kbase, kcat, qre, kcat);
        em.gated_eq("R8", kbase, kcat, kcat, kbase, 1);
    }
    if (e.product_of.size() == 2 && e.product_of[0] == e.product_of[1])
        em.le("R13", Key{e.product_of[0], Inv::compl_}, kcat);
}

void BoundsDb::compile_map(std::vector<Tightening>& out,
                           const Entity& e) const {
    Emitter em{out};
    Key se{e.label, Inv::secat}, re{e.label, Inv::relcat};
    Key pu{e.label, Inv::Pushcat}, Re{e.label, Inv::Relcat};
    Key cm{e.label, Inv::compl_map}, km{e.label, Inv::cat_map};
    Key ksrc{e.src, Inv::cat}, ktgt{e.tgt, Inv::cat};

    em.le("R1", se, re);
    em.le("R1", re, pu);
    em.le("R1", pu, Re);
    em.le("R1", Re, se, 1);
    em.le("R11", se, ktgt);
    em.le("R12", km, ksrc);
    em.le("R12", km, ktgt);
    em.le("R13", ktgt, cm);
    em.le("R13", cm, Key{e.tgt, Inv::compl_});
    if (e.is_equivalence) {
        std::string why = " = 0 since " + e.label + " is an equivalence";
        em.const_hi("R17", "secat(" + e.label + ")" + why, se, 0);
        em.const_hi("R17", "relcat(" + e.label + ")" + why, re, 0);
        em.const_hi("R17", "Pushcat(" + e.label + ")" + why, pu, 0);
        em.const_hi("R17", "Relcat(" + e.label + ")" + why, Re, 0);
    } else if (e.has_section) {
        em.const_hi("R17",
                    "secat(" + e.label + ") = 0 since " + e.label +
                        " has a section",
                    se, 0);
    }
    if (!e.dominated_by.empty()) {
        em.le("R2", se, Key{e.dominated_by, Inv::secat});
        if (e.domination == Entity::Domination::relative)
            em.le("R2", re, Key{e.dominated_by, Inv::relcat});
    }
    if (!e.pushout_of.empty()) {
        em.le("R3", re, Key{e.pushout_of, Inv::relcat});
        em.le("R3", Re, Key{e.pushout_of, Inv::Relcat});
    }
    if (!e.fibre_of.empty()) {
        const Entity& f = entities_.at(e.fibre_of);
        em.le("R5", re, Key{f.tgt, Inv::cat});
        em.le("R5", Re, Key{f.tgt, Inv::Cat});
        em.eq("R12", Key{f.label, Inv::cat_map}, se);
    }
    if (!e.cone_of.empty()) {
        em.le("R7", re, Key{e.cone_of, Inv::relcat}, 1);
        em.le("R7", pu, Key{e.cone_of, Inv::Pushcat}, 1);
        if (e.cone_sectioned)
            em.le("R7", Re, Key{e.cone_of, Inv::Relcat}, 1);
    }
    if (!e.cofibre_of.empty())
        em.const_hi("R6",
                    "Relcat(" + e.label + ") <= 1 since " + e.label +
                        " is a cofibre projection",
                    Re, 1);
    if (!e.ganea_alpha_of.empty()) {
        int i = e.ganea_alpha_index;
        em.min_eq("R9", re, i, Key{e.ganea_alpha_of, Inv::relcat});
        em.min_lower("R9", se, i, Key{e.ganea_alpha_of, Inv::secat});
    }
    if (!e.ganea_beta_of.empty()) {
        int i = e.ganea_beta_index;
        em.min_eq("R9", se, i, Key{e.ganea_beta_of, Inv::secat});
        em.min_eq("R9", re, i + 1, Key{e.ganea_beta_of, Inv::relcat});
    }
    if (!e.pullback_of.empty()) {
        const Entity& along = entities_.at(e.pullback_along);
        em.le("R10", se, Key{e.pullback_of, Inv::secat});
        em.le("R5", re, Key{e.pullback_of, Inv::relcat});
        em.le("R5", Re, Key{e.pullback_of, Inv::Relcat});
        if (along.has_section || along.is_equivalence)
            em.le("R10", Key{e.pullback_of, Inv::secat}, se);
    }
    if (!e.factors_through.empty())
        em.le("R11", Key{e.factors_through, Inv::secat}, se);
    if (!e.diagonal_of.empty()) {
        const std::string& x = e.diagonal_of;
        if (e.diagonal_arity == 2) {
            em.eq("R13", se, Key{x, Inv::compl_});
            em.eq("R13", re, Key{x, Inv::relcompl});
            em.eq("R13", pu, Key{x, Inv::Pushcompl});
            em.eq("R13", Re, Key{x, Inv::Compl});
        }
        em.le("R13", Key{x, Inv::cat}, se);
        em.le("R15", Key{x, Inv::Cat}, Re);
        for (const std::string& label : order_) {
            const Entity& p = entities_.at(label);
            if (p.kind != Entity::Kind::object) continue;
            if (static_cast<int>(p.product_of.size()) != e.diagonal_arity - 1)
                continue;
            bool all_x = true;
            for (const std::string& f : p.product_of)
                if (f != x) all_x = false;
            if (!all_x) continue;
            em.le("R13", Key{label, Inv::cat}, se);
            em.le("R15", Key{label, Inv::Cat}, Re);
        }
    }
}

std::vector<BoundsDb::Tightening> BoundsDb::compile() const {
    std::vector<Tightening> out;
    for (const std::string& label : order_) {
        const Entity& e = entities_.at(label);
        if (e.kind == Entity::Kind::object)
            compile_object(out, e);
        else
            compile_map(out, e);
    }
    return out;
}

bool BoundsDb::apply(const Tightening& t) {
    std::vector<Interval> pv;
    pv.reserve(t.premises.size());
    std::vector<std::pair<Key, Interval>> recorded;
    recorded.reserve(t.premises.size());
    for (const Key& pk : t.premises) {
        Interval piv = state_.at(pk);
        pv.push_back(piv);
        recorded.emplace_back(pk, piv);
    }
    std::optional<int> b = t.eval(pv);
    if (!b) return false;

    Interval cur = state_.at(t.target);
    Derivation d;
    d.rule = t.rule;
    d.note = t.note;
    d.target = t.target;
    d.side = t.side;
    d.bound = *b;
    d.before = cur;
    d.premises = std::move(recorded);
    d.eval = t.eval;
    if (t.side == Derivation::Side::lo) {
        if (*b <= cur.lo) return false;
        if (*b > cur.hi) conflict(t.target, std::move(d));
        cur.lo = *b;
    } else {
        if (*b >= cur.hi) return false;
        if (*b < cur.lo) conflict(t.target, std::move(d));
        cur.hi = *b;
    }
    d.after = cur;
    d.id = static_cast<int>(log_.size());
    if (t.side == Derivation::Side::lo)
        prov_[t.target].lo = d.id;
    else
        prov_[t.target].hi = d.id;
    log_.push_back(std::move(d));
    state_[t.target] = cur;
    return true;
}

BoundsDb::PropagateReport BoundsDb::run(std::vector<Tightening> rules,
                                        bool shuffled, unsigned seed) {
    rules.erase(std::remove_if(rules.begin(), rules.end(),
                               [&](const Tightening& t) {
                                   return disabled_.count(t.rule) != 0;
                               }),
                rules.end());
    std::mt19937 rng(seed);
    PropagateReport rep;
    for (int round = 0; round < kMaxRounds; ++round) {
        if (shuffled) std::shuffle(rules.begin(), rules.end(), rng);
        int changed = 0;
        for (const Tightening& t : rules)
            if (apply(t)) ++changed;
        ++rep.rounds;
        rep.tightenings += changed;
        if (changed == 0) return rep;
    }
    throw BoundsError("propagation did not converge");
}

BoundsDb::PropagateReport BoundsDb::propagate() {
    return run(compile(), false, 0);
}

BoundsDb::PropagateReport BoundsDb::propagate_shuffled(unsigned seed) {
    return run(compile(), true, seed);
}

Interval BoundsDb::interval(const Key& k) const {
    checked_entity(k);
    return state_.at(k);
}

BoundsDb::Query BoundsDb::query(const Key& k) const {
    Query q;
    q.interval = interval(k);
    std::vector<Key> agenda{k};
    std::set<Key> seen{k};
    std::set<int> pushed;
    for (size_t at = 0; at < agenda.size(); ++at) {
        Key cur = agenda[at];
        auto pit = prov_.find(cur);
        if (pit == prov_.end()) continue;
        for (int id : {pit->second.lo, pit->second.hi}) {
            if (id < 0 || pushed.count(id)) continue;
            pushed.insert(id);
            const Derivation& d = log_[static_cast<size_t>(id)];
            q.tree.push_back(d);
            for (const auto& [pk, piv] : d.premises) {
                if (seen.insert(pk).second) agenda.push_back(pk);
            }
        }
    }
    return q;
}

std::string BoundsDb::derivation_text(const Key& k) const { return chain_text(k, 0); }

std::string BoundsDb::chain_text(const Key& k, int depth) const {
    std::ostringstream os;
    std::set<Key> visited;
    std::function<void(const Key&, int)> walk = [&](const Key& key, int d) {
        std::string pad(static_cast<size_t>(2 * d), ' ');
        auto sit = state_.find(key);
        if (sit == state_.end()) return;
        os << pad << key_text(key) << " in " << interval_text(sit->second)
           << "\n";
        if (!visited.insert(key).second || d >= 5) return;
        auto pit = prov_.find(key);
        if (pit == prov_.end()) return;
        for (int id : {pit->second.lo, pit->second.hi}) {
            if (id < 0) continue;
            const Derivation& der = log_[static_cast<size_t>(id)];
            os << pad << "  "
               << (der.side == Derivation::Side::lo ? "lo " : "hi ")
               << der.bound << " by " << der.rule;
            if (!der.note.empty()) os << ": " << der.note;
            os << "\n";
            for (const auto& [pk, piv] : der.premises) walk(pk, d + 1);
        }
    };
    walk(k, depth);
    return os.str();
}

void BoundsDb::conflict(const Key& k, Derivation attempted) const {
    std::ostringstream os;
    os << "INCONSISTENT at " << key_text(k) << ": "
       << (attempted.side == Derivation::Side::lo ? "lower" : "upper")
       << " bound " << attempted.bound << " by " << attempted.rule;
    if (!attempted.note.empty()) os << " (" << attempted.note << ")";
    os << " empties " << interval_text(state_.at(k)) << "\n";
    os << "attempted bound premises:\n";
    if (attempted.premises.empty()) os << "  (none)\n";
    for (const auto& [pk, piv] : attempted.premises) os << chain_text(pk, 1);
    os << "standing bounds:\n" << chain_text(k, 1);
    throw InconsistentError(os.str());
}

void BoundsDb::check_consistency() const {
    for (const auto& [k, iv] : state_) {
        if (iv.lo > iv.hi)
            throw InconsistentError("empty interval at " + key_text(k) + ": " +
                                    interval_text(iv));
    }
    for (const Derivation& d : log_) {
        if (d.after.lo < d.before.lo || d.after.hi > d.before.hi)
            throw BoundsError("derivation " + std::to_string(d.id) +
                              " widened an interval");
        if (!d.eval) continue;  // facts carry their own justification
        std::vector<Interval> pv;
        pv.reserve(d.premises.size());
        for (const auto& [pk, piv] : d.premises) pv.push_back(piv);
        std::optional<int> b = d.eval(pv);
        if (!b || *b != d.bound)
            throw BoundsError("derivation " + std::to_string(d.id) + " (" +
                              d.rule + " at " + key_text(d.target) +
                              ") does not replay");
    }
}

std::string BoundsDb::state_signature() const {
    std::ostringstream os;
    for (const auto& [k, iv] : state_)
        os << key_text(k) << "=" << interval_text(iv) << "\n";
    return os.str();
}

}  // namespace secat
