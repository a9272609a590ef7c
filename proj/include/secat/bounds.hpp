// Interval propagation for sectional category invariants.
//
// Entities are objects and maps carrying declared structural relations
// (cofibres, fibres, diagonals, suspensions, products, Ganea stage maps,
// dominations, pushouts, pullback squares, factorizations, cone
// attachments). A fixed catalog of rules R1..R17 turns those relations into
// inequalities between the integer invariants of the entities involved;
// propagate() runs the rules to their least fixpoint, only ever shrinking
// intervals, and records a replayable derivation for every tightening.
//
// Structural facts are trusted inputs: the engine never verifies them
// against a model, it only draws the consequences. Facts are read as facts
// about pointed objects whenever a rule needs pointedness.
#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace secat {

// `compl` is reserved in C++; the text name of compl_ stays "compl".
enum class Inv {
    secat,
    relcat,
    Pushcat,
    Relcat,
    compl_map,
    cat_map,
    cat,
    Cat,
    compl_,
    relcompl,
    Pushcompl,
    Compl,
};

const char* inv_name(Inv inv);
std::optional<Inv> inv_from_name(const std::string& name);
// cat/Cat and the complexity family live on objects, the rest on maps.
bool inv_on_objects(Inv inv);

inline constexpr int kNoBound = std::numeric_limits<int>::max();

struct Interval {
    int lo = 0;
    int hi = kNoBound;
    bool operator==(const Interval&) const = default;
    bool contains(int v) const { return lo <= v && v <= hi; }
    bool is_point() const { return lo == hi; }
};

std::string interval_text(const Interval& iv);

struct BoundsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownKeyError : BoundsError {
    using BoundsError::BoundsError;
};
// Raised when a fact or a rule firing would empty an interval; the message
// carries the derivation chains behind both colliding bounds.
struct InconsistentError : BoundsError {
    using BoundsError::BoundsError;
};

struct Entity {
    enum class Kind { object, map };
    Kind kind = Kind::object;
    std::string label;
    std::string src, tgt;  // maps only; must name declared objects

    // Map attributes.
    bool is_equivalence = false;
    bool has_section = false;

    // Relations. Every referenced label must be declared beforehand, which
    // keeps the definitional graph acyclic by construction.
    std::string cofibre_of;     // on an object: cofibre of that map;
                                // on a map: the cofibre projection of it
    std::string fibre_of;       // map: fibre inclusion of that map
    std::string diagonal_of;    // map: diagonal of that object into the
    int diagonal_arity = 0;     //      arity-fold power of it
    std::string suspension_of;  // object: suspension of that object
    std::vector<std::string> product_of;  // object: product of those objects
    std::string ganea_alpha_of;  // map: the stage map A -> G_i of that map
    int ganea_alpha_index = -1;
    std::string ganea_beta_of;  // map: the stage fibre inclusion F_i -> G_i
    int ganea_beta_index = -1;
    std::string dominated_by;  // map: dominated by that map (same source)
    enum class Domination { none, simple, relative };
    Domination domination = Domination::none;
    std::string pushout_of;     // map: cobase change of that map ...
    std::string pushout_along;  // ... along this one (same source span)
    std::string factors_through;  // map: homotopic to factors_through . via
    std::string factors_via;      // optional first factor, may be empty
    std::string pullback_of;     // map: base change of that map ...
    std::string pullback_along;  // ... along this one (into the same target)
    std::string cone_of;  // map: target obtained from that map's target by
                          // attaching one cone compatibly with the sources
    bool cone_sectioned = false;  // the attaching retraction has a section
};

Entity object_entity(std::string label);
Entity map_entity(std::string label, std::string src, std::string tgt);

struct Key {
    std::string entity;
    Inv inv = Inv::secat;
    bool operator==(const Key&) const = default;
    bool operator<(const Key& o) const {
        if (entity != o.entity) return entity < o.entity;
        return static_cast<int>(inv) < static_cast<int>(o.inv);
    }
};

std::string key_text(const Key& k);

// One tightening of one interval: either a fact (rule "fact", note = source)
// or a rule firing, in which case eval re-derives the imposed bound from the
// recorded premise intervals.
struct Derivation {
    enum class Side { lo, hi };
    int id = -1;
    std::string rule;
    std::string note;
    Key target;
    Side side = Side::lo;
    int bound = 0;
    Interval before, after;
    std::vector<std::pair<Key, Interval>> premises;
    std::function<std::optional<int>(const std::vector<Interval>&)> eval;
};

struct RuleInfo {
    std::string id;
    std::string summary;
};
// The static catalog: seventeen rule groups, in order R1..R17.
const std::vector<RuleInfo>& rule_catalog();
bool known_rule(const std::string& id);

class BoundsDb {
public:
    // Declares an entity and materializes its six invariant keys at [0, inf).
    void declare(const Entity& e);
    // Meets the stored interval with iv; source labels the derivation.
    void assert_fact(const Key& k, Interval iv, const std::string& source);
    void disable_rule(const std::string& rule_id);

    struct PropagateReport {
        int rounds = 0;
        int tightenings = 0;
    };
    // Runs the rule instances to the least fixpoint in a fixed order.
    PropagateReport propagate();
    // Same fixpoint, randomized firing order; exists to test exactly that.
    PropagateReport propagate_shuffled(unsigned seed);

    bool declared(const std::string& label) const;
    const Entity& entity(const std::string& label) const;
    const std::vector<std::string>& labels() const { return order_; }

    Interval interval(const Key& k) const;
    struct Query {
        Interval interval;
        // The derivations justifying the current bounds, target first, then
        // the justifications of their premises, each key visited once.
        std::vector<Derivation> tree;
    };
    Query query(const Key& k) const;
    // Indented text form of the derivations behind the current bounds at k.
    std::string derivation_text(const Key& k) const;

    const std::vector<Derivation>& log() const { return log_; }
    // Replays every recorded derivation and re-checks every interval.
    void check_consistency() const;
    // All keys with their intervals, one line each; used by the
    // order-independence tests and the structured report.
    std::string state_signature() const;

private:
    struct Tightening {
        std::string rule;
        std::string note;
        Key target;
        Derivation::Side side = Derivation::Side::lo;
        std::vector<Key> premises;
        std::function<std::optional<int>(const std::vector<Interval>&)> eval;
    };
    struct Emitter;

    const Entity& checked_entity(const Key& k) const;
    void materialize(const std::string& label);
    std::vector<Tightening> compile() const;
    void compile_object(std::vector<Tightening>& out, const Entity& e) const;
    void compile_map(std::vector<Tightening>& out, const Entity& e) const;
    bool apply(const Tightening& t);
    PropagateReport run(std::vector<Tightening> rules, bool shuffled, unsigned seed);
    std::string chain_text(const Key& k, int depth) const;
    [[noreturn]] void conflict(const Key& k, Derivation attempted) const;

    std::vector<std::string> order_;
    std::map<std::string, Entity> entities_;
    std::map<Key, Interval> state_;
    struct Prov {
        int lo = -1, hi = -1;  // derivation ids, -1 for the trivial bound
    };
    std::map<Key, Prov> prov_;
    std::vector<Derivation> log_;
    std::set<std::string> disabled_;
};

}  // namespace secat
