#include "secat/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace secat {
namespace {

struct Scanner {
    std::istream& in;
    std::string what;
    int line_no = 0;

    // Next meaningful line, tokenized on whitespace. Comments run from '#'
    // to the end of the line.
    bool next(std::vector<std::string>& tok) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            if (!raw.empty() && raw.back() == '\r') raw.pop_back();
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            tok.clear();
            std::istringstream ss(raw);
            std::string t;
            while (ss >> t) tok.push_back(t);
            if (!tok.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(what + ":" + std::to_string(line_no) + ": " + msg);
    }
};

int to_int(Scanner& sc, const std::string& s) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        sc.fail("expected an integer, got '" + s + "'");
    }
}

Rat to_rat(Scanner& sc, const std::string& s) {
    auto r = rat_from_string(s);
    if (!r) sc.fail("expected a rational p/q, got '" + s + "'");
    return *r;
}

void expect_header(Scanner& sc, const std::string& kind) {
    std::vector<std::string> tok;
    if (!sc.next(tok)) sc.fail("empty input, expected '" + kind + " 1' header");
    if (tok.size() != 2 || tok[0] != kind || tok[1] != "1")
        sc.fail("expected '" + kind + " 1' header");
}

// Shared builder for "complex NAME ... end" blocks. Degree lines fix the
// dimensions, d lines fill boundary entries; everything is assembled and
// checked when the block ends.
struct ComplexBlock {
    std::string name;
    std::map<int, int> degrees;
    std::vector<std::tuple<int, int, int, Rat>> entries;

    ChainComplex build(Scanner& sc) const {
        GradedDims dims;
        if (!degrees.empty()) {
            int lo = degrees.begin()->first;
            int hi = degrees.rbegin()->first;
            std::vector<int> ds(static_cast<std::size_t>(hi - lo + 1), 0);
            for (auto [n, k] : degrees) ds[static_cast<std::size_t>(n - lo)] = k;
            dims = GradedDims(lo, std::move(ds));
        }
        std::map<int, QMatrix> mats;
        for (auto& [n, i, j, c] : entries) {
            int rows = dims.dim(n - 1), cols = dims.dim(n);
            if (i < 0 || i >= rows || j < 0 || j >= cols)
                throw InvalidComplexError(sc.what + ": complex " + name + ": boundary entry (" +
                                          std::to_string(i) + ", " + std::to_string(j) +
                                          ") out of range at degree " + std::to_string(n));
            auto it = mats.find(n);
            if (it == mats.end())
                it = mats.emplace(n, QMatrix(static_cast<std::size_t>(rows),
                                             static_cast<std::size_t>(cols)))
                         .first;
            it->second(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = c;
        }
        ChainComplex X{dims};
        for (auto& [n, m] : mats) X.set_d(n, m);
        if (!X.valid())
            throw InvalidComplexError(sc.what + ": complex " + name +
                                      ": d composed with d is not zero");
        return X;
    }
};

// Reads the body of a complex block, sc positioned after "complex NAME".
ComplexBlock read_complex_block(Scanner& sc, std::string name) {
    ComplexBlock b;
    b.name = std::move(name);
    std::vector<std::string> tok;
    while (sc.next(tok)) {
        if (tok[0] == "end") return b;
        if (tok[0] == "degree" && tok.size() == 3) {
            int n = to_int(sc, tok[1]), k = to_int(sc, tok[2]);
            if (k < 0) sc.fail("negative dimension");
            if (!b.degrees.emplace(n, k).second)
                sc.fail("duplicate degree " + std::to_string(n));
        } else if (tok[0] == "d" && tok.size() == 5) {
            b.entries.emplace_back(to_int(sc, tok[1]), to_int(sc, tok[2]), to_int(sc, tok[3]),
                                   to_rat(sc, tok[4]));
        } else {
            sc.fail("expected 'degree', 'd' or 'end' inside complex " + b.name);
        }
    }
    sc.fail("complex " + b.name + " not closed with 'end'");
}

// Entry accumulation for map and witness blocks: (degree, row, col, coeff)
// against fixed source and target dimension tables.
GradedMap build_graded(Scanner& sc, const std::string& name, const GradedDims& src,
                       const GradedDims& tgt, int shift,
                       const std::vector<std::tuple<int, int, int, Rat>>& entries) {
    GradedMap f(src, tgt, shift);
    std::map<int, QMatrix> mats;
    for (auto& [n, i, j, c] : entries) {
        int rows = tgt.dim(n + shift), cols = src.dim(n);
        if (i < 0 || i >= rows || j < 0 || j >= cols)
            throw InvalidComplexError(sc.what + ": " + name + ": entry (" + std::to_string(i) +
                                      ", " + std::to_string(j) + ") out of range at degree " +
                                      std::to_string(n));
        auto it = mats.find(n);
        if (it == mats.end())
            it = mats.emplace(n, QMatrix(static_cast<std::size_t>(rows),
                                         static_cast<std::size_t>(cols)))
                     .first;
        it->second(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = c;
    }
    for (auto& [n, m] : mats) f.set(n, m);
    return f;
}

std::vector<std::tuple<int, int, int, Rat>> read_entry_block(Scanner& sc,
                                                             const std::string& owner) {
    std::vector<std::tuple<int, int, int, Rat>> entries;
    std::vector<std::string> tok;
    while (sc.next(tok)) {
        if (tok[0] == "end") return entries;
        if (tok[0] == "entry" && tok.size() == 5) {
            entries.emplace_back(to_int(sc, tok[1]), to_int(sc, tok[2]), to_int(sc, tok[3]),
                                 to_rat(sc, tok[4]));
        } else {
            sc.fail("expected 'entry' or 'end' inside " + owner);
        }
    }
    sc.fail(owner + " not closed with 'end'");
}

void write_complex_block(std::ostream& out, const std::string& name, const ChainComplex& X) {
    out << "complex " << name << "\n";
    for (int n = X.lo(); n <= X.hi(); ++n)
        if (X.dim(n) > 0) out << "degree " << n << " " << X.dim(n) << "\n";
    for (int n = X.lo(); n <= X.hi(); ++n) {
        QMatrix m = X.d().at(n);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (m(i, j) != 0)
                    out << "d " << n << " " << i << " " << j << " " << rat_to_string(m(i, j))
                        << "\n";
    }
    out << "end\n";
}

void write_entries(std::ostream& out, const GradedMap& f) {
    for (int n = f.src().lo(); n <= f.src().hi(); ++n) {
        QMatrix m = f.at(n);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (m(i, j) != 0)
                    out << "entry " << n << " " << i << " " << j << " "
                        << rat_to_string(m(i, j)) << "\n";
    }
}

}  // namespace

// ------------------------------------------------------------------ chain

const ChainComplex* ChainFile::find(const std::string& name) const {
    for (auto& [n, c] : complexes)
        if (n == name) return &c;
    return nullptr;
}

ChainFile parse_chain_file(std::istream& in, const std::string& what) {
    Scanner sc{in, what};
    expect_header(sc, "chain");
    ChainFile out;
    std::vector<std::string> tok;
    while (sc.next(tok)) {
        if (tok[0] == "complex" && tok.size() == 2) {
            if (out.find(tok[1])) sc.fail("duplicate complex " + tok[1]);
            auto block = read_complex_block(sc, tok[1]);
            out.complexes.emplace_back(block.name, block.build(sc));
        } else {
            sc.fail("expected 'complex NAME'");
        }
    }
    if (out.complexes.empty()) sc.fail("chain file declares no complex");
    return out;
}

ChainFile load_chain_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    return parse_chain_file(in, path);
}

void write_chain_file(std::ostream& out, const ChainFile& file) {
    out << "chain 1\n";
    for (auto& [name, X] : file.complexes) write_complex_block(out, name, X);
}

// --------------------------------------------------------------- chainmap

const ChainComplex* ChainMapFile::find(const std::string& name) const {
    for (auto& [n, c] : complexes)
        if (n == name) return &c;
    return nullptr;
}

const ChainMapFile::MapBlock* ChainMapFile::find_map(const std::string& name) const {
    for (auto& m : maps)
        if (m.name == name) return &m;
    return nullptr;
}

ChainMapFile parse_chainmap_file(std::istream& in, const std::string& what) {
    Scanner sc{in, what};
    expect_header(sc, "chainmap");
    ChainMapFile out;
    std::vector<std::string> tok;
    while (sc.next(tok)) {
        if (tok[0] == "complex" && tok.size() == 2) {
            if (out.find(tok[1])) sc.fail("duplicate complex " + tok[1]);
            auto block = read_complex_block(sc, tok[1]);
            out.complexes.emplace_back(block.name, block.build(sc));
        } else if (tok[0] == "map" && tok.size() == 4) {
            if (out.find_map(tok[1])) sc.fail("duplicate map " + tok[1]);
            const ChainComplex* src = out.find(tok[2]);
            const ChainComplex* tgt = out.find(tok[3]);
            if (!src) sc.fail("map " + tok[1] + " references unknown complex " + tok[2]);
            if (!tgt) sc.fail("map " + tok[1] + " references unknown complex " + tok[3]);
            auto entries = read_entry_block(sc, "map " + tok[1]);
            GradedMap f = build_graded(sc, "map " + tok[1], src->dims(), tgt->dims(), 0, entries);
            if (!is_chain_map(*src, *tgt, f))
                throw InvalidComplexError(what + ": map " + tok[1] +
                                          " does not commute with the boundaries");
            out.maps.push_back({tok[1], tok[2], tok[3], std::move(f)});
        } else {
            sc.fail("expected 'complex NAME' or 'map NAME SRC TGT'");
        }
    }
    if (out.maps.empty()) sc.fail("chainmap file declares no map");
    return out;
}

ChainMapFile load_chainmap_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    return parse_chainmap_file(in, path);
}

void write_chainmap_file(std::ostream& out, const ChainMapFile& file) {
    out << "chainmap 1\n";
    for (auto& [name, X] : file.complexes) write_complex_block(out, name, X);
    for (auto& m : file.maps) {
        out << "map " << m.name << " " << m.src << " " << m.tgt << "\n";
        write_entries(out, m.map);
        out << "end\n";
    }
}

// ------------------------------------------------------------------- ring

const GradedRing* RingFile::find(const std::string& name) const {
    auto it = rings.find(name);
    return it == rings.end() ? nullptr : it->second.get();
}

const RingFile::HomBlock* RingFile::find_hom(const std::string& name) const {
    for (auto& h : homs)
        if (h.name == name) return &h;
    return nullptr;
}

namespace {

std::shared_ptr<GradedRing> read_ring_block(Scanner& sc, const std::string& name) {
    std::vector<std::string> labels;
    std::vector<int> degrees;
    std::map<std::string, std::size_t> index;
    std::string unit_label;
    // (a, b) -> accumulated element, plus the set of pairs given explicitly
    // so the sign rule can fill the mirror image of the rest.
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t, Rat>> products;

    std::vector<std::string> tok;
    bool closed = false;
    while (sc.next(tok)) {
        if (tok[0] == "end") {
            closed = true;
            break;
        }
        if (tok[0] == "basis" && tok.size() == 3) {
            if (index.count(tok[1])) sc.fail("duplicate basis label " + tok[1]);
            index[tok[1]] = labels.size();
            labels.push_back(tok[1]);
            degrees.push_back(to_int(sc, tok[2]));
        } else if (tok[0] == "unit" && tok.size() == 2) {
            if (!unit_label.empty()) sc.fail("duplicate unit line");
            unit_label = tok[1];
        } else if (tok[0] == "product" && tok.size() == 5) {
            for (int k = 1; k <= 3; ++k)
                if (!index.count(tok[static_cast<std::size_t>(k)]))
                    sc.fail("unknown basis label " + tok[static_cast<std::size_t>(k)]);
            products.emplace_back(index[tok[1]], index[tok[2]], index[tok[3]],
                                  to_rat(sc, tok[4]));
        } else {
            sc.fail("expected 'basis', 'unit', 'product' or 'end' inside ring " + name);
        }
    }
    if (!closed) sc.fail("ring " + name + " not closed with 'end'");
    if (labels.empty()) sc.fail("ring " + name + " has no basis");
    if (unit_label.empty()) sc.fail("ring " + name + " has no unit line");
    if (!index.count(unit_label)) sc.fail("unit label " + unit_label + " is not a basis label");

    std::size_t rank = labels.size();
    std::size_t unit = index[unit_label];
    std::vector<std::vector<RingElt>> table(rank, std::vector<RingElt>(rank, RingElt(rank, 0)));
    for (std::size_t j = 0; j < rank; ++j) {
        table[unit][j][j] = 1;
        table[j][unit][j] = 1;
    }
    std::set<std::pair<std::size_t, std::size_t>> given;
    for (auto& [a, b, c, coeff] : products) {
        if (a == unit || b == unit)
            sc.fail("products with the unit of ring " + name + " are implicit");
        table[a][b][c] += coeff;
        given.insert({a, b});
    }
    for (auto& [a, b] : given) {
        if (given.count({b, a})) continue;
        Rat sign = (degrees[a] * degrees[b]) % 2 == 0 ? 1 : -1;
        for (std::size_t c = 0; c < rank; ++c) table[b][a][c] = sign * table[a][b][c];
    }
    try {
        return std::make_shared<GradedRing>(labels, degrees, unit, table);
    } catch (const RingError& e) {
        throw InvalidRingError(sc.what + ": ring " + name + ": " + e.what());
    }
}

}  // namespace

RingFile parse_ring_file(std::istream& in, const std::string& what) {
    Scanner sc{in, what};
    expect_header(sc, "ring");
    RingFile out;
    std::vector<std::string> tok;
    while (sc.next(tok)) {
        if (tok[0] == "ring" && tok.size() == 2) {
            if (out.find(tok[1])) sc.fail("duplicate ring " + tok[1]);
            out.rings[tok[1]] = read_ring_block(sc, tok[1]);
            out.order.push_back(tok[1]);
        } else if (tok[0] == "ring" && tok.size() == 6 && tok[2] == "=" && tok[3] == "product") {
            if (out.find(tok[1])) sc.fail("duplicate ring " + tok[1]);
            const GradedRing* r1 = out.find(tok[4]);
            const GradedRing* r2 = out.find(tok[5]);
            if (!r1) sc.fail("unknown ring " + tok[4]);
            if (!r2) sc.fail("unknown ring " + tok[5]);
            try {
                out.rings[tok[1]] = std::make_shared<GradedRing>(tensor_ring(*r1, *r2));
            } catch (const RingError& e) {
                throw InvalidRingError(what + ": ring " + tok[1] + ": " + e.what());
            }
            out.order.push_back(tok[1]);
        } else if (tok[0] == "hom" && tok.size() == 4) {
            if (out.find_hom(tok[1])) sc.fail("duplicate hom " + tok[1]);
            const GradedRing* src = out.find(tok[2]);
            const GradedRing* tgt = out.find(tok[3]);
            if (!src) sc.fail("hom " + tok[1] + " references unknown ring " + tok[2]);
            if (!tgt) sc.fail("hom " + tok[1] + " references unknown ring " + tok[3]);
            std::map<std::string, std::size_t> si, ti;
            for (std::size_t i = 0; i < src->rank(); ++i) si[src->label(i)] = i;
            for (std::size_t i = 0; i < tgt->rank(); ++i) ti[tgt->label(i)] = i;
            QMatrix m(tgt->rank(), src->rank());
            std::vector<std::string> btok;
            bool closed = false;
            while (sc.next(btok)) {
                if (btok[0] == "end") {
                    closed = true;
                    break;
                }
                if (btok[0] == "send" && btok.size() == 4) {
                    auto a = si.find(btok[1]);
                    auto b = ti.find(btok[2]);
                    if (a == si.end()) sc.fail("unknown source label " + btok[1]);
                    if (b == ti.end()) sc.fail("unknown target label " + btok[2]);
                    m(b->second, a->second) += to_rat(sc, btok[3]);
                } else {
                    sc.fail("expected 'send' or 'end' inside hom " + tok[1]);
                }
            }
            if (!closed) sc.fail("hom " + tok[1] + " not closed with 'end'");
            try {
                out.homs.push_back({tok[1], tok[2], tok[3], ring_hom(*src, *tgt, std::move(m))});
            } catch (const RingError& e) {
                throw InvalidRingError(what + ": hom " + tok[1] + ": " + e.what());
            }
        } else {
            sc.fail("expected 'ring NAME', 'ring NAME = product R1 R2' or 'hom NAME SRC TGT'");
        }
    }
    if (out.order.empty()) sc.fail("ring file declares no ring");
    return out;
}

RingFile load_ring_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    return parse_ring_file(in, path);
}

// ------------------------------------------------------------------ facts

namespace {

// Splits "value", "value:detail" or comma lists; returns the pieces.
std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void apply_entity_attr(Scanner& sc, Entity& e, const std::string& word) {
    auto eq = word.find('=');
    std::string key = word.substr(0, eq);
    std::string value = eq == std::string::npos ? "" : word.substr(eq + 1);
    auto need_value = [&] {
        if (value.empty()) sc.fail("attribute " + key + " needs a value");
    };
    auto parts = split_on(value, ':');
    if (key == "equivalence" && value.empty()) {
        e.is_equivalence = true;
    } else if (key == "section" && value.empty()) {
        e.has_section = true;
    } else if (key == "cofibre_of") {
        need_value();
        e.cofibre_of = value;
    } else if (key == "fibre_of") {
        need_value();
        e.fibre_of = value;
    } else if (key == "suspension_of") {
        need_value();
        e.suspension_of = value;
    } else if (key == "product_of") {
        need_value();
        e.product_of = split_on(value, ',');
    } else if (key == "diagonal_of") {
        if (parts.size() != 2) sc.fail("diagonal_of takes OBJECT:ARITY");
        e.diagonal_of = parts[0];
        e.diagonal_arity = to_int(sc, parts[1]);
    } else if (key == "ganea_alpha_of") {
        if (parts.size() != 2) sc.fail("ganea_alpha_of takes MAP:INDEX");
        e.ganea_alpha_of = parts[0];
        e.ganea_alpha_index = to_int(sc, parts[1]);
    } else if (key == "ganea_beta_of") {
        if (parts.size() != 2) sc.fail("ganea_beta_of takes MAP:INDEX");
        e.ganea_beta_of = parts[0];
        e.ganea_beta_index = to_int(sc, parts[1]);
    } else if (key == "dominated_by") {
        if (parts.size() == 1) {
            e.dominated_by = parts[0];
            e.domination = Entity::Domination::simple;
        } else if (parts.size() == 2 && (parts[1] == "simple" || parts[1] == "relative")) {
            e.dominated_by = parts[0];
            e.domination = parts[1] == "simple" ? Entity::Domination::simple
                                                : Entity::Domination::relative;
        } else {
            sc.fail("dominated_by takes MAP[:simple|relative]");
        }
    } else if (key == "pushout_of") {
        if (parts.size() != 2) sc.fail("pushout_of takes MAP:ALONG");
        e.pushout_of = parts[0];
        e.pushout_along = parts[1];
    } else if (key == "pullback_of") {
        if (parts.size() != 2) sc.fail("pullback_of takes MAP:ALONG");
        e.pullback_of = parts[0];
        e.pullback_along = parts[1];
    } else if (key == "factors_through") {
        if (parts.size() == 1) {
            e.factors_through = parts[0];
        } else if (parts.size() == 2) {
            e.factors_through = parts[0];
            e.factors_via = parts[1];
        } else {
            sc.fail("factors_through takes MAP[:VIA]");
        }
    } else if (key == "cone_of") {
        if (parts.size() == 1) {
            e.cone_of = parts[0];
        } else if (parts.size() == 2 && parts[1] == "sectioned") {
            e.cone_of = parts[0];
            e.cone_sectioned = true;
        } else {
            sc.fail("cone_of takes MAP[:sectioned]");
        }
    } else {
        sc.fail("unknown attribute '" + word + "'");
    }
}

}  // namespace

void FactsFile::install(BoundsDb& db) const {
    for (const Entity& e : entities) db.declare(e);
    for (const FactLine& f : facts) db.assert_fact({f.entity, f.inv}, f.iv, f.source);
}

FactsFile parse_facts_file(std::istream& in, const std::string& what) {
    Scanner sc{in, what};
    expect_header(sc, "facts");
    FactsFile out;
    static const std::regex fact_re(
        R"(^\s*fact\s+(\w+)\(([^()\s]+)\)\s*=\s*\[\s*(\d+)\s*,\s*(\d+|inf)\s*\]\s*(?:source=(\S+)\s*)?$)");
    static const std::regex query_re(R"(^\s*query\s+(\w+)\(([^()\s]+)\)\s*$)");

    std::vector<std::string> tok;
    while (sc.next(tok)) {
        if (tok[0] == "object" && tok.size() >= 2) {
            Entity e = object_entity(tok[1]);
            for (std::size_t k = 2; k < tok.size(); ++k) apply_entity_attr(sc, e, tok[k]);
            out.entities.push_back(std::move(e));
        } else if (tok[0] == "map" && tok.size() >= 4) {
            Entity e = map_entity(tok[1], tok[2], tok[3]);
            for (std::size_t k = 4; k < tok.size(); ++k) apply_entity_attr(sc, e, tok[k]);
            out.entities.push_back(std::move(e));
        } else if (tok[0] == "fact" || tok[0] == "query") {
            // Reassemble the raw line so the bracket syntax may carry spaces.
            std::string raw;
            for (std::size_t k = 0; k < tok.size(); ++k) raw += (k ? " " : "") + tok[k];
            std::smatch m;
            if (tok[0] == "fact") {
                if (!std::regex_match(raw, m, fact_re))
                    sc.fail("expected 'fact INV(LABEL) = [LO, HI] source=TAG'");
                auto inv = inv_from_name(m[1].str());
                if (!inv) sc.fail("unknown invariant '" + m[1].str() + "'");
                Interval iv;
                iv.lo = to_int(sc, m[3].str());
                iv.hi = m[4].str() == "inf" ? kNoBound : to_int(sc, m[4].str());
                out.facts.push_back(
                    {m[2].str(), *inv, iv, m[5].matched ? m[5].str() : std::string("file")});
            } else {
                if (!std::regex_match(raw, m, query_re)) sc.fail("expected 'query INV(LABEL)'");
                auto inv = inv_from_name(m[1].str());
                if (!inv) sc.fail("unknown invariant '" + m[1].str() + "'");
                out.queries.emplace_back(m[2].str(), *inv);
            }
        } else {
            sc.fail("expected 'object', 'map', 'fact' or 'query'");
        }
    }
    if (out.entities.empty()) sc.fail("facts file declares no entity");
    return out;
}

FactsFile load_facts_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    return parse_facts_file(in, path);
}

// ------------------------------------------------------------ certificate

namespace {

struct NameTables {
    std::map<std::string, ObjRef> objs;
    std::map<std::string, MapRef> maps;
    std::map<std::string, WitnessRef> wits;
};

ObjRef need_obj(Scanner& sc, const NameTables& t, const std::string& n) {
    auto it = t.objs.find(n);
    if (it == t.objs.end()) sc.fail("unknown complex " + n);
    return it->second;
}

MapRef need_map(Scanner& sc, const NameTables& t, const std::string& n) {
    auto it = t.maps.find(n);
    if (it == t.maps.end()) sc.fail("unknown map " + n);
    return it->second;
}

WitnessRef need_wit(Scanner& sc, const NameTables& t, const std::string& n) {
    auto it = t.wits.find(n);
    if (it == t.wits.end()) sc.fail("unknown witness " + n);
    return it->second;
}

}  // namespace

CertificateFile parse_certificate_file(std::istream& in, const std::string& what) {
    Scanner sc{in, what};
    expect_header(sc, "certificate");
    CertificateFile out;
    out.backend = std::make_unique<ChainBackend>();
    ChainBackend& bk = *out.backend;
    NameTables names;
    bool have_base = false, have_lambda = false, have_ll = false, have_lr = false,
         have_target = false;

    std::vector<std::string> tok;
    while (sc.next(tok)) {
        if (tok[0] == "kind" && tok.size() == 2) {
            if (tok[1] != "relcat" && tok[1] != "pushcat")
                sc.fail("kind must be relcat or pushcat");
            out.kind = tok[1];
        } else if (tok[0] == "complex" && tok.size() == 2) {
            if (names.objs.count(tok[1])) sc.fail("duplicate complex " + tok[1]);
            auto block = read_complex_block(sc, tok[1]);
            names.objs[tok[1]] = bk.add_object(block.build(sc));
        } else if (tok[0] == "map" && tok.size() == 4) {
            if (names.maps.count(tok[1])) sc.fail("duplicate map " + tok[1]);
            ObjRef s = need_obj(sc, names, tok[2]);
            ObjRef t = need_obj(sc, names, tok[3]);
            auto entries = read_entry_block(sc, "map " + tok[1]);
            GradedMap f = build_graded(sc, "map " + tok[1], bk.complex_of(s).dims(),
                                       bk.complex_of(t).dims(), 0, entries);
            try {
                names.maps[tok[1]] = bk.add_map(s, t, std::move(f));
            } catch (const HcatError& e) {
                throw CertificateDataError(what + ": map " + tok[1] + ": " + e.what());
            }
        } else if (tok[0] == "witness" && tok.size() == 4) {
            if (names.wits.count(tok[1])) sc.fail("duplicate witness " + tok[1]);
            MapRef l = need_map(sc, names, tok[2]);
            MapRef r = need_map(sc, names, tok[3]);
            auto entries = read_entry_block(sc, "witness " + tok[1]);
            GradedMap s = build_graded(sc, "witness " + tok[1],
                                       bk.complex_of(bk.source(l)).dims(),
                                       bk.complex_of(bk.target(l)).dims(), 1, entries);
            try {
                names.wits[tok[1]] = bk.add_witness(l, r, std::move(s));
            } catch (const HcatError& e) {
                throw CertificateDataError(what + ": witness " + tok[1] + ": " + e.what());
            }
        } else if (tok[0] == "base" && tok.size() == 2) {
            out.cert.A = need_obj(sc, names, tok[1]);
            have_base = true;
        } else if (tok[0] == "stage" && tok.size() == 2) {
            out.cert.stages.push_back(need_obj(sc, names, tok[1]));
        } else if (tok[0] == "iota" && tok.size() == 2) {
            out.cert.iotas.push_back(need_map(sc, names, tok[1]));
        } else if (tok[0] == "lambda" && tok.size() == 2) {
            out.cert.lambda = need_map(sc, names, tok[1]);
            have_lambda = true;
        } else if (tok[0] == "lambda_left" && tok.size() == 2) {
            out.cert.lambda_left = need_wit(sc, names, tok[1]);
            have_ll = true;
        } else if (tok[0] == "lambda_right" && tok.size() == 2) {
            out.cert.lambda_right = need_wit(sc, names, tok[1]);
            have_lr = true;
        } else if (tok[0] == "target" && tok.size() == 2) {
            out.target = need_map(sc, names, tok[1]);
            have_target = true;
        } else if (tok[0] == "step" && (tok.size() == 7 || tok.size() == 10)) {
            CertStep st;
            st.Z = need_obj(sc, names, tok[1]);
            st.rho = need_map(sc, names, tok[2]);
            st.tau = need_map(sc, names, tok[3]);
            st.chi = need_map(sc, names, tok[4]);
            st.glue = need_wit(sc, names, tok[5]);
            st.coh = need_wit(sc, names, tok[6]);
            if (tok.size() == 10) {
                st.sigma = need_map(sc, names, tok[7]);
                st.rho_sigma = need_wit(sc, names, tok[8]);
                st.tau_sigma = need_wit(sc, names, tok[9]);
            }
            out.cert.steps.push_back(st);
        } else {
            sc.fail("unexpected line in certificate file");
        }
    }
    if (out.kind.empty()) sc.fail("certificate file has no kind line");
    if (!have_base) sc.fail("certificate file has no base line");
    if (out.cert.stages.empty()) sc.fail("certificate file has no stage lines");
    if (out.cert.iotas.size() != out.cert.stages.size())
        sc.fail("certificate file needs one iota per stage");
    if (!have_lambda || !have_ll || !have_lr)
        sc.fail("certificate file needs lambda, lambda_left and lambda_right");
    if (!have_target) sc.fail("certificate file has no target line");
    return out;
}

CertificateFile load_certificate_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    return parse_certificate_file(in, path);
}

void write_certificate_file(std::ostream& out, const ChainBackend& bk,
                            const RelcatCertificate& cert, MapRef target,
                            const std::string& kind) {
    auto oname = [](ObjRef o) { return "o" + std::to_string(o.id); };
    auto mname = [](MapRef m) { return "m" + std::to_string(m.id); };
    auto wname = [](WitnessRef w) { return "w" + std::to_string(w.id); };

    out << "certificate 1\n";
    out << "kind " << kind << "\n";
    for (std::size_t i = 0; i < bk.object_count(); ++i) {
        ObjRef o{static_cast<int>(i)};
        write_complex_block(out, oname(o), bk.complex_of(o));
    }
    for (std::size_t i = 0; i < bk.map_count(); ++i) {
        MapRef m{static_cast<int>(i)};
        out << "map " << mname(m) << " " << oname(bk.source(m)) << " "
            << oname(bk.target(m)) << "\n";
        write_entries(out, bk.graded(m));
        out << "end\n";
    }
    for (std::size_t i = 0; i < bk.witness_count(); ++i) {
        WitnessRef w{static_cast<int>(i)};
        out << "witness " << wname(w) << " " << mname(bk.witness_lhs(w)) << " "
            << mname(bk.witness_rhs(w)) << "\n";
        write_entries(out, bk.witness_graded(w));
        out << "end\n";
    }
    out << "base " << oname(cert.A) << "\n";
    for (ObjRef s : cert.stages) out << "stage " << oname(s) << "\n";
    for (MapRef i : cert.iotas) out << "iota " << mname(i) << "\n";
    out << "lambda " << mname(cert.lambda) << "\n";
    out << "lambda_left " << wname(cert.lambda_left) << "\n";
    out << "lambda_right " << wname(cert.lambda_right) << "\n";
    out << "target " << mname(target) << "\n";
    for (const CertStep& st : cert.steps) {
        out << "step " << oname(st.Z) << " " << mname(st.rho) << " " << mname(st.tau) << " "
            << mname(st.chi) << " " << wname(st.glue) << " " << wname(st.coh);
        if (st.sigma && st.rho_sigma && st.tau_sigma)
            out << " " << mname(*st.sigma) << " " << wname(*st.rho_sigma) << " "
                << wname(*st.tau_sigma);
        out << "\n";
    }
}

}  // namespace secat
