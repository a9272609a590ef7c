#include "secat/cli.hpp"

#include "secat/bounds.hpp"
#include "secat/certificates.hpp"
#include "secat/ganea.hpp"
#include "secat/instances.hpp"
#include "secat/io.hpp"
#include "secat/ring.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#ifndef SECAT_DATA_DIR
#define SECAT_DATA_DIR "data"
#endif

namespace secat {
namespace cli {
namespace {

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TraceBlock {
    std::string key;
    std::vector<std::string> lines;
};

struct Item {
    std::string id;
    bool pass = false;
    std::vector<std::string> detail;
};

struct Report {
    std::string command, subject;
    std::vector<std::string> inputs;
    int cap = kDefaultCap;
    std::string status = "OK";
    std::string error_kind, error_message;
    std::vector<std::pair<std::string, std::string>> results;
    std::vector<std::string> notes;
    std::vector<std::string> fact_lines;
    std::vector<Item> items;
    std::vector<TraceBlock> traces;

    void result(const std::string& key, const std::string& value) {
        results.emplace_back(key, value);
    }
    void set_error(const std::string& kind, const std::string& message) {
        status = "ERROR";
        error_kind = kind;
        error_message = message;
    }
    int exit_code() const {
        if (status == "OK" || status == "OVER_CAP") return 0;
        if (status == "ERROR") return 2;
        return 1;
    }
};

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

void emit_text(std::ostream& out, const Report& r, long long ms) {
    out << "report " << r.command << " 1\n";
    out << "command " << r.command;
    if (!r.subject.empty()) out << " " << r.subject;
    for (const auto& p : r.inputs) out << " " << p;
    out << "\n";
    for (const auto& p : r.inputs) out << "input " << p << "\n";
    out << "cap " << r.cap << "\n";
    out << "status " << r.status << "\n";
    if (r.status == "ERROR") out << "error " << r.error_kind << ": " << r.error_message << "\n";
    for (const auto& [k, v] : r.results) out << "result " << k << " = " << v << "\n";
    for (const auto& n : r.notes) out << "note " << n << "\n";
    for (const auto& f : r.fact_lines) out << f << "\n";
    for (const Item& it : r.items) {
        out << "item " << it.id << " " << (it.pass ? "pass" : "FAIL") << "\n";
        for (const auto& d : it.detail) out << "  " << d << "\n";
    }
    for (const TraceBlock& t : r.traces) {
        out << "trace " << t.key << "\n";
        for (const auto& l : t.lines) out << "  " << l << "\n";
    }
    out << "time " << ms << " ms\n";
}

void emit_json(std::ostream& out, const Report& r) {
    nlohmann::json j;
    j["format"] = "secat-report/1";
    j["command"] = r.command;
    if (!r.subject.empty()) j["subject"] = r.subject;
    j["inputs"] = r.inputs;
    j["cap"] = r.cap;
    j["status"] = r.status;
    if (r.status == "ERROR")
        j["error"] = {{"kind", r.error_kind}, {"message", r.error_message}};
    if (!r.results.empty()) {
        auto& arr = j["results"] = nlohmann::json::array();
        for (const auto& [k, v] : r.results) arr.push_back({{"key", k}, {"value", v}});
    }
    if (!r.notes.empty()) j["notes"] = r.notes;
    if (!r.fact_lines.empty()) j["facts"] = r.fact_lines;
    if (!r.items.empty()) {
        auto& arr = j["items"] = nlohmann::json::array();
        for (const Item& it : r.items)
            arr.push_back({{"id", it.id}, {"pass", it.pass}, {"detail", it.detail}});
    }
    if (!r.traces.empty()) {
        auto& arr = j["traces"] = nlohmann::json::array();
        for (const TraceBlock& t : r.traces)
            arr.push_back({{"key", t.key}, {"lines", t.lines}});
    }
    out << j.dump(2) << "\n";
}

// First meaningful token of a file, used to dispatch on the format header.
std::string sniff_kind(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::string raw;
    while (std::getline(in, raw)) {
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ss(raw);
        std::string t;
        if (ss >> t) return t;
    }
    throw ParseError(path + ": empty input");
}

const std::string& single_input(const CommandRequest& req) {
    if (req.inputs.size() != 1)
        throw UsageError(req.command + " takes exactly one input file");
    return req.inputs[0];
}

void append_stage_trace(Report& r, const std::string& key, const InvariantResult& res) {
    TraceBlock t;
    t.key = key;
    for (const StageNote& n : res.trace) {
        std::ostringstream os;
        os << "stage " << n.stage << " " << (n.success ? "ok" : "fail") << ": " << n.note;
        t.lines.push_back(os.str());
    }
    r.traces.push_back(std::move(t));
}

void finish_invariant(Report& r, const std::string& key, const InvariantResult& res,
                      bool trace) {
    if (res.over_cap) {
        r.status = "OVER_CAP";
        r.result(key, "OVER_CAP");
    } else {
        r.result(key, std::to_string(res.value));
    }
    if (trace) append_stage_trace(r, key, res);
}

// ------------------------------------------------------------------ chain

void do_chain(const CommandRequest& req, Report& r) {
    const std::string& path = single_input(req);
    std::string kind = sniff_kind(path);
    ChainBackend bk;
    if (req.subject == "secat" || req.subject == "relcat") {
        if (kind != "chainmap")
            throw UsageError(req.subject + " needs a chainmap file, got '" + kind + "'");
        ChainMapFile f = load_chainmap_file(path);
        const ChainMapFile::MapBlock* mb = nullptr;
        if (!req.map_name.empty()) {
            mb = f.find_map(req.map_name);
            if (!mb) throw UsageError(path + " has no map named " + req.map_name);
        } else if (f.maps.size() == 1) {
            mb = &f.maps[0];
        } else {
            throw UsageError(path + " has several maps, pick one with --map");
        }
        std::map<std::string, ObjRef> objs;
        for (const auto& [name, X] : f.complexes) objs[name] = bk.add_object(X);
        MapRef m = bk.add_map(objs[mb->src], objs[mb->tgt], mb->map);
        InvariantResult res =
            req.subject == "secat" ? secat(bk, m, req.cap) : relcat(bk, m, req.cap);
        finish_invariant(r, req.subject + "(" + mb->name + ")", res, req.trace);
    } else if (req.subject == "cat" || req.subject == "compl") {
        std::vector<std::pair<std::string, ChainComplex>> complexes;
        if (kind == "chain") {
            complexes = load_chain_file(path).complexes;
        } else if (kind == "chainmap") {
            complexes = load_chainmap_file(path).complexes;
        } else {
            throw UsageError(req.subject + " needs a chain file, got '" + kind + "'");
        }
        const std::pair<std::string, ChainComplex>* pick = nullptr;
        if (!req.object_name.empty()) {
            for (const auto& c : complexes)
                if (c.first == req.object_name) pick = &c;
            if (!pick) throw UsageError(path + " has no complex named " + req.object_name);
        } else if (complexes.size() == 1) {
            pick = &complexes[0];
        } else {
            throw UsageError(path + " has several complexes, pick one with --object");
        }
        ObjRef x = bk.add_object(pick->second);
        InvariantResult res =
            req.subject == "cat" ? cat_obj(bk, x, req.cap) : compl_obj(bk, x, req.cap);
        finish_invariant(r, req.subject + "(" + pick->first + ")", res, req.trace);
    } else {
        throw UsageError("chain subject must be secat, relcat, cat or compl");
    }
}

// ---------------------------------------------------------------- certify

void report_validation(Report& r, const std::string& kind, const CertificateReport& rep) {
    r.result("kind", kind);
    if (rep.accepted) {
        r.result("accepted", "true");
        r.result("length", std::to_string(rep.length));
    } else {
        r.status = "REJECT";
        r.result("accepted", "false");
        r.result("stage", std::to_string(rep.failed_stage));
        r.result("check", rep.reason);
    }
}

void do_certify(const CommandRequest& req, Report& r) {
    const std::string& path = single_input(req);
    if (req.subject == "relcat" || req.subject == "pushcat") {
        CertificateFile f = load_certificate_file(path);
        if (f.kind != req.subject)
            r.notes.push_back("file declares kind " + f.kind + ", validating as " +
                              req.subject);
        CertificateReport rep =
            req.subject == "relcat"
                ? validate_relcat_certificate(*f.backend, f.cert, f.target)
                : validate_pushcat_certificate(*f.backend, f.cert, f.target);
        report_validation(r, req.subject, rep);
    } else if (req.subject == "suspension") {
        ChainFile f = load_chain_file(path);
        if (f.complexes.size() != 1)
            throw UsageError("suspension certification needs exactly one complex");
        ChainBackend bk;
        ObjRef x = bk.add_object(f.complexes[0].second);
        SuspensionComplCertificate scc = suspension_compl_certificate(bk, x);
        CertificateReport rep = validate_relcat_certificate(bk, scc.cert, scc.diag);
        r.notes.push_back("certificate for the diagonal of the suspension of " +
                          f.complexes[0].first);
        report_validation(r, "relcat", rep);
    } else {
        throw UsageError("certify kind must be relcat, pushcat or suspension");
    }
}

// --------------------------------------------------------------- estimate

std::string sanitize_label(const std::string& raw) {
    std::string out;
    for (char c : raw) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')
            out += c;
        else if (c == '(' || c == ',')
            out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out.empty() ? std::string("ring") : out;
}

void do_estimate(const CommandRequest& req, Report& r) {
    const std::string& input = single_input(req);
    int lb = -1;
    std::string default_key;
    if (input.rfind("builtin:", 0) == 0) {
        if (req.subject == "secat-of-hom")
            throw UsageError("secat-of-hom needs a ring file with a hom block");
        std::string name = input.substr(8);
        GradedRing ring = builtin_ring(name);
        lb = req.subject == "cat" ? cat_lower(ring, req.cap) : compl_lower(ring, req.cap);
        default_key = req.subject + "(" + sanitize_label(name) + ")";
        r.notes.push_back("ring " + name + ": rank " + std::to_string(ring.rank()) +
                          ", top degree " + std::to_string(ring.top_degree()));
    } else {
        RingFile f = load_ring_file(input);
        if (req.subject == "secat-of-hom") {
            const RingFile::HomBlock* hb = nullptr;
            if (!req.map_name.empty()) {
                hb = f.find_hom(req.map_name);
                if (!hb) throw UsageError(input + " has no hom named " + req.map_name);
            } else if (f.homs.size() == 1) {
                hb = &f.homs[0];
            } else {
                throw UsageError(input + " needs exactly one hom block, or pick one with --hom");
            }
            lb = secat_lower(hb->hom, req.cap);
            default_key = "secat(" + hb->name + ")";
            r.notes.push_back("hom " + hb->name + ": " + hb->src + " -> " + hb->tgt);
        } else if (req.subject == "cat" || req.subject == "compl") {
            const GradedRing* ring = nullptr;
            std::string label;
            if (!req.object_name.empty()) {
                ring = f.find(req.object_name);
                if (!ring) throw UsageError(input + " has no ring named " + req.object_name);
                label = req.object_name;
            } else if (f.order.size() == 1) {
                ring = f.find(f.order[0]);
                label = f.order[0];
            } else {
                throw UsageError(input + " has several rings, pick one with --object");
            }
            lb = req.subject == "cat" ? cat_lower(*ring, req.cap) : compl_lower(*ring, req.cap);
            default_key = req.subject + "(" + label + ")";
            r.notes.push_back("ring " + label + ": rank " + std::to_string(ring->rank()) +
                              ", top degree " + std::to_string(ring->top_degree()));
        } else {
            throw UsageError("estimate target must be cat, compl or secat-of-hom");
        }
    }
    r.result("lower_bound", std::to_string(lb));
    std::string key = req.emit_key.empty() ? default_key : req.emit_key;
    r.notes.push_back("fact line for a facts file:");
    r.fact_lines.push_back("fact " + key + " = [" + std::to_string(lb) +
                           ", inf] source=estimator");
}

// ----------------------------------------------------------------- bounds

std::vector<Inv> invs_for(Entity::Kind kind) {
    std::vector<Inv> out;
    for (int i = 0; i < 12; ++i) {
        Inv inv = static_cast<Inv>(i);
        if (inv_on_objects(inv) == (kind == Entity::Kind::object)) out.push_back(inv);
    }
    return out;
}

void do_bounds(const CommandRequest& req, Report& r) {
    const std::string& path = single_input(req);
    FactsFile f = load_facts_file(path);
    BoundsDb db;
    for (const auto& rule : req.disabled_rules) db.disable_rule(rule);
    f.install(db);
    auto rep = db.propagate();
    {
        std::ostringstream os;
        os << "fixpoint after " << rep.rounds << " rounds, " << rep.tightenings
           << " tightenings";
        r.notes.push_back(os.str());
    }
    for (const auto& rule : req.disabled_rules) r.notes.push_back("rule " + rule + " disabled");
    for (const Entity& e : f.entities)
        for (Inv inv : invs_for(e.kind))
            r.result(key_text({e.label, inv}), interval_text(db.interval({e.label, inv})));
    auto add_trace = [&](const Key& k) {
        TraceBlock t;
        t.key = key_text(k);
        t.lines = split_lines(db.derivation_text(k));
        r.traces.push_back(std::move(t));
    };
    for (const auto& [label, inv] : f.queries) add_trace({label, inv});
    if (req.trace)
        for (const Entity& e : f.entities)
            for (Inv inv : invs_for(e.kind)) add_trace({e.label, inv});
}

// --------------------------------------------------------------- examples

struct ExampleCtx {
    std::string data;
    int cap = kDefaultCap;
    std::vector<std::string> disabled;
};

using ItemFn = std::function<Item(const ExampleCtx&)>;

Item make_item(const std::string& id, const ExampleCtx& ctx,
               const std::function<void(const ExampleCtx&, Item&)>& body) {
    Item it;
    it.id = id;
    it.pass = true;
    try {
        body(ctx, it);
    } catch (const std::exception& e) {
        it.pass = false;
        it.detail.push_back(std::string("exception: ") + e.what());
    }
    return it;
}

void check_eq(Item& it, const std::string& what, const std::string& got,
              const std::string& want) {
    if (got == want) {
        it.detail.push_back(what + " = " + got);
    } else {
        it.pass = false;
        it.detail.push_back(what + " = " + got + ", expected " + want);
    }
}

void bounds_fixture(const ExampleCtx& ctx, Item& it, const std::string& file,
                    const std::vector<std::pair<Key, Interval>>& expect) {
    FactsFile f = load_facts_file(ctx.data + "/" + file);
    BoundsDb db;
    for (const auto& rule : ctx.disabled) db.disable_rule(rule);
    f.install(db);
    db.propagate();
    for (const auto& [k, want] : expect)
        check_eq(it, key_text(k), interval_text(db.interval(k)), interval_text(want));
}

InvariantResult chainmap_invariant(const ExampleCtx& ctx, const std::string& file,
                                   const std::string& subject) {
    ChainMapFile f = load_chainmap_file(ctx.data + "/" + file);
    if (f.maps.size() != 1) throw UsageError(file + " should carry exactly one map");
    ChainBackend bk;
    std::map<std::string, ObjRef> objs;
    for (const auto& [name, X] : f.complexes) objs[name] = bk.add_object(X);
    MapRef m = bk.add_map(objs[f.maps[0].src], objs[f.maps[0].tgt], f.maps[0].map);
    return subject == "secat" ? secat(bk, m, ctx.cap) : relcat(bk, m, ctx.cap);
}

std::string invariant_text(const InvariantResult& res) {
    return res.over_cap ? "OVER_CAP" : std::to_string(res.value);
}

void suite_item(const ExampleCtx&, Item& it, void (*instance)(ChainBackend&, std::mt19937&),
                int n, unsigned seed) {
    auto bad = props::run_suite(instance, n, seed);
    if (bad) {
        it.pass = false;
        it.detail.push_back(*bad);
    } else {
        it.detail.push_back(std::to_string(n) + " instances checked");
    }
}

std::vector<std::pair<std::string, ItemFn>> example_table() {
    std::vector<std::pair<std::string, ItemFn>> t;
    auto add = [&](const std::string& id,
                   const std::function<void(const ExampleCtx&, Item&)>& body) {
        t.emplace_back(id, [id, body](const ExampleCtx& ctx) { return make_item(id, ctx, body); });
    };

    add("hopf-bounds", [](const ExampleCtx& ctx, Item& it) {
        bounds_fixture(ctx, it, "hopf.facts",
                       {{{"h", Inv::secat}, {1, 1}},
                        {{"h", Inv::relcat}, {2, 2}},
                        {{"h", Inv::Pushcat}, {2, 2}},
                        {{"h", Inv::Relcat}, {2, 2}}});
    });
    add("cp3s4-bounds", [](const ExampleCtx& ctx, Item& it) {
        bounds_fixture(ctx, it, "cp3s4.facts",
                       {{{"iota", Inv::compl_map}, {2, 2}}, {{"s4", Inv::compl_}, {2, 2}}});
    });
    add("evensphere-bounds", [](const ExampleCtx& ctx, Item& it) {
        std::vector<std::pair<Key, Interval>> expect;
        for (const char* s : {"s2", "s4", "s6"})
            for (Inv inv : {Inv::compl_, Inv::relcompl, Inv::Pushcompl, Inv::Compl})
                expect.push_back({{s, inv}, {2, 2}});
        bounds_fixture(ctx, it, "evensphere.facts", expect);
    });
    add("estimate-kernel-cuplength", [](const ExampleCtx& ctx, Item& it) {
        RingFile f = load_ring_file(ctx.data + "/cp3s4hom.ring");
        const RingFile::HomBlock* hb = f.find_hom("delta1");
        if (!hb) throw UsageError("cp3s4hom.ring has no hom delta1");
        check_eq(it, "secat_lower(delta1)", std::to_string(secat_lower(hb->hom, ctx.cap)),
                 "2");
    });
    add("estimate-sphere-compl", [](const ExampleCtx& ctx, Item& it) {
        GradedRing ring = builtin_ring("sphere(2)");
        check_eq(it, "compl_lower(sphere(2))", std::to_string(compl_lower(ring, ctx.cap)),
                 "2");
    });
    add("estimate-cp2-cat", [](const ExampleCtx& ctx, Item& it) {
        GradedRing ring = builtin_ring("cp(2)");
        check_eq(it, "cat_lower(cp(2))", std::to_string(cat_lower(ring, ctx.cap)), "2");
    });
    add("chain-identity-secat", [](const ExampleCtx& ctx, Item& it) {
        check_eq(it, "secat(id)", invariant_text(chainmap_invariant(ctx, "id_s2.chainmap", "secat")),
                 "0");
    });
    add("chain-s2-cat", [](const ExampleCtx& ctx, Item& it) {
        ChainFile f = load_chain_file(ctx.data + "/s2.chain");
        ChainBackend bk;
        ObjRef x = bk.add_object(f.complexes[0].second);
        check_eq(it, "cat(s2)", invariant_text(cat_obj(bk, x, ctx.cap)), "1");
    });
    add("corpus-takens", [](const ExampleCtx& ctx, Item& it) {
        namespace fs = std::filesystem;
        std::vector<std::string> files;
        fs::path dir = fs::path(ctx.data) / "corpus";
        if (!fs::is_directory(dir)) throw UsageError("missing corpus directory " + dir.string());
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".chainmap") files.push_back(e.path().filename().string());
        std::sort(files.begin(), files.end());
        if (files.empty()) throw UsageError("corpus directory is empty");
        for (const auto& name : files) {
            InvariantResult s = chainmap_invariant(ctx, "corpus/" + name, "secat");
            InvariantResult rc = chainmap_invariant(ctx, "corpus/" + name, "relcat");
            if (s.over_cap || rc.over_cap) {
                it.pass = false;
                it.detail.push_back(name + ": over cap");
                continue;
            }
            int diff = rc.value - s.value;
            if (diff == 0 || diff == 1) {
                it.detail.push_back(name + ": secat " + std::to_string(s.value) + ", relcat " +
                                    std::to_string(rc.value));
            } else {
                it.pass = false;
                it.detail.push_back(name + ": relcat - secat = " + std::to_string(diff));
            }
        }
    });
    add("certify-pinch", [](const ExampleCtx& ctx, Item& it) {
        CertificateFile f = load_certificate_file(ctx.data + "/pinch.cert");
        CertificateReport rep = validate_relcat_certificate(*f.backend, f.cert, f.target);
        check_eq(it, "accepted", rep.accepted ? "true" : "false", "true");
        if (rep.accepted) check_eq(it, "length", std::to_string(rep.length), "1");
    });
    add("certify-suspension", [](const ExampleCtx& ctx, Item& it) {
        ChainFile f = load_chain_file(ctx.data + "/s1.chain");
        ChainBackend bk;
        ObjRef x = bk.add_object(f.complexes[0].second);
        SuspensionComplCertificate scc = suspension_compl_certificate(bk, x);
        CertificateReport rep = validate_relcat_certificate(bk, scc.cert, scc.diag);
        check_eq(it, "accepted", rep.accepted ? "true" : "false", "true");
        if (rep.accepted) check_eq(it, "length", std::to_string(rep.length), "2");
    });
    add("certify-tampered", [](const ExampleCtx& ctx, Item& it) {
        try {
            CertificateFile f = load_certificate_file(ctx.data + "/pinch_tampered.cert");
            CertificateReport rep = validate_relcat_certificate(*f.backend, f.cert, f.target);
            check_eq(it, "accepted", rep.accepted ? "true" : "false", "false");
            if (!rep.accepted)
                it.detail.push_back("check: " + rep.reason + " at stage " +
                                    std::to_string(rep.failed_stage));
        } catch (const CertificateDataError& e) {
            it.detail.push_back(std::string("rejected while loading: ") + e.what());
        }
    });
    add("pushout-raises-secat", [](const ExampleCtx& ctx, Item& it) {
        ChainFile f = load_chain_file(ctx.data + "/s1.chain");
        ChainBackend bk;
        ObjRef a = bk.add_object(f.complexes[0].second);
        ObjRef z = bk.zero_object();
        MapRef iota = bk.zero_map(a, z);
        InvariantResult before = secat(bk, iota, ctx.cap);
        PushoutResult po = bk.h_pushout(iota, iota);
        InvariantResult after = secat(bk, po.in_b, ctx.cap);
        check_eq(it, "secat(iota)", invariant_text(before), "0");
        check_eq(it, "secat(cobase change)", invariant_text(after), "1");
    });
    add("props-whisker", [](const ExampleCtx& ctx, Item& it) {
        suite_item(ctx, it, props::whisker_uniqueness_instance, 25, 301);
    });
    add("props-prism-pushout", [](const ExampleCtx& ctx, Item& it) {
        suite_item(ctx, it, props::prism_pushout_instance, 25, 302);
    });
    add("props-prism-pullback", [](const ExampleCtx& ctx, Item& it) {
        suite_item(ctx, it, props::prism_pullback_instance, 25, 303);
    });
    add("props-cube", [](const ExampleCtx& ctx, Item& it) {
        suite_item(ctx, it, props::cube_axiom_instance, 25, 304);
    });
    add("props-join", [](const ExampleCtx& ctx, Item& it) {
        suite_item(ctx, it, props::join_base_change_instance, 25, 305);
    });
    add("props-doublecofibre", [](const ExampleCtx& ctx, Item& it) {
        suite_item(ctx, it, props::double_cofibre_instance, 25, 306);
    });
    return t;
}

void do_examples(const CommandRequest& req, Report& r) {
    auto table = example_table();
    if (req.list) {
        for (const auto& [id, fn] : table) r.result(id, "available");
        return;
    }
    ExampleCtx ctx;
    ctx.data = req.data_dir.empty() ? SECAT_DATA_DIR : req.data_dir;
    ctx.cap = req.cap;
    ctx.disabled = req.disabled_rules;
    for (const auto& rule : ctx.disabled) r.notes.push_back("rule " + rule + " disabled");
    int failed = 0;
    for (const auto& [id, fn] : table) {
        Item it = fn(ctx);
        if (!it.pass) ++failed;
        r.items.push_back(std::move(it));
    }
    r.result("passed", std::to_string(table.size() - static_cast<std::size_t>(failed)));
    r.result("failed", std::to_string(failed));
    if (failed > 0) r.status = "FAIL";
}

}  // namespace

std::vector<std::string> example_ids() {
    std::vector<std::string> out;
    for (const auto& [id, fn] : example_table()) out.push_back(id);
    return out;
}

int run_command(const CommandRequest& req, std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();
    Report r;
    r.command = req.command;
    r.subject = req.subject;
    r.inputs = req.inputs;
    r.cap = req.cap;
    try {
        if (req.command == "chain") {
            do_chain(req, r);
        } else if (req.command == "certify") {
            do_certify(req, r);
        } else if (req.command == "estimate") {
            do_estimate(req, r);
        } else if (req.command == "bounds") {
            do_bounds(req, r);
        } else if (req.command == "examples") {
            do_examples(req, r);
        } else {
            throw UsageError("unknown command '" + req.command + "'");
        }
    } catch (const UsageError& e) {
        r.set_error("USAGE", e.what());
    } catch (const ParseError& e) {
        r.set_error("PARSE_ERROR", e.what());
    } catch (const InvalidComplexError& e) {
        r.set_error("INVALID_COMPLEX", e.what());
    } catch (const InvalidRingError& e) {
        r.set_error("INVALID_RING", e.what());
    } catch (const CertificateDataError& e) {
        if (req.command == "certify") {
            r.status = "REJECT";
            r.result("accepted", "false");
            r.result("check", std::string("structural: ") + e.what());
        } else {
            r.set_error("INVALID_CERTIFICATE", e.what());
        }
    } catch (const InconsistentError& e) {
        r.status = "INCONSISTENT";
        r.notes.push_back(e.what());
    } catch (const BoundsError& e) {
        r.set_error("INVALID_FACTS", e.what());
    } catch (const RingError& e) {
        r.set_error("INVALID_RING", e.what());
    } catch (const HcatError& e) {
        r.set_error("INTERNAL", e.what());
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    if (req.format == "structured")
        emit_json(out, r);
    else
        emit_text(out, r, ms);
    return r.exit_code();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"sectional category toolkit: exact chain computations, certificate "
                 "validation, cohomological estimates and interval propagation"};
    app.require_subcommand(1);
    CommandRequest req;

    auto add_common = [&](CLI::App* sub, bool with_cap) {
        if (with_cap)
            sub->add_option("--cap", req.cap, "stage search cap")->check(CLI::Range(0, 64));
        sub->add_option("--format", req.format, "report format")
            ->check(CLI::IsMember({"text", "structured"}));
    };

    CLI::App* chain = app.add_subcommand("chain", "compute an invariant of a chain model");
    chain->add_option("subject", req.subject, "secat, relcat, cat or compl")
        ->required()
        ->check(CLI::IsMember({"secat", "relcat", "cat", "compl"}));
    chain->add_option("input", req.inputs, "chain or chainmap file")->required();
    chain->add_option("--map", req.map_name, "map to use when the file has several");
    chain->add_option("--object", req.object_name, "complex to use when the file has several");
    chain->add_flag("--trace", req.trace, "include the stage-by-stage search trace");
    add_common(chain, true);

    CLI::App* certify = app.add_subcommand("certify", "validate a stage certificate");
    certify->add_option("kind", req.subject, "relcat, pushcat or suspension")
        ->required()
        ->check(CLI::IsMember({"relcat", "pushcat", "suspension"}));
    certify->add_option("input", req.inputs, "certificate file, or a chain file for suspension")
        ->required();
    add_common(certify, true);

    CLI::App* estimate = app.add_subcommand("estimate", "cohomological lower bounds");
    estimate->add_option("target", req.subject, "cat, compl or secat-of-hom")
        ->required()
        ->check(CLI::IsMember({"cat", "compl", "secat-of-hom"}));
    estimate->add_option("input", req.inputs, "ring file or builtin:NAME")->required();
    estimate->add_option("--object", req.object_name, "ring to use when the file has several");
    estimate->add_option("--hom", req.map_name, "hom to use when the file has several");
    estimate->add_option("--emit-key", req.emit_key, "key of the emitted fact line");
    add_common(estimate, true);

    CLI::App* bounds = app.add_subcommand("bounds", "propagate fact intervals to a fixpoint");
    bounds->add_option("input", req.inputs, "facts file")->required();
    bounds->add_option("--disable-rule", req.disabled_rules, "rule id to switch off")
        ->allow_extra_args(false);
    bounds->add_flag("--trace", req.trace, "print derivations for every key");
    add_common(bounds, true);

    CLI::App* examples = app.add_subcommand("examples", "run the bundled golden suite");
    examples->add_flag("--list", req.list, "list item ids without running");
    examples->add_option("--disable-rule", req.disabled_rules, "rule id to switch off")
        ->allow_extra_args(false);
    examples->add_option("--data", req.data_dir, "bundled data directory");
    add_common(examples, true);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    req.command = app.get_subcommands().front()->get_name();
    return run_command(req, out);
}

}  // namespace cli
}  // namespace secat
