#include "secat/ring.hpp"

#include <algorithm>
#include <utility>

namespace secat {

namespace {

int parity_sign(int a, int b) { return (a % 2 != 0 && b % 2 != 0) ? -1 : 1; }

}  // namespace

GradedRing::GradedRing(std::vector<std::string> labels, std::vector<int> degrees,
                       std::size_t unit, std::vector<std::vector<RingElt>> table)
    : labels_(std::move(labels)), degrees_(std::move(degrees)), unit_(unit),
      table_(std::move(table)) {
    const std::size_t n = degrees_.size();
    if (n == 0) throw RingError("ring needs at least the unit");
    if (labels_.size() != n || table_.size() != n)
        throw RingError("ring presentation sizes disagree");
    if (unit_ >= n) throw RingError("unit index out of range");
    for (int d : degrees_) {
        if (d < 0) throw RingError("negative degree in ring basis");
        top_ = std::max(top_, d);
    }
    if (degrees_[unit_] != 0) throw RingError("unit must sit in degree zero");

    for (std::size_t i = 0; i < n; ++i) {
        if (table_[i].size() != n) throw RingError("multiplication table is not square");
        for (std::size_t j = 0; j < n; ++j) {
            const RingElt& e = table_[i][j];
            if (e.size() != n) throw RingError("table entry has the wrong length");
            for (std::size_t k = 0; k < n; ++k)
                if (e[k] != 0 && degrees_[k] != degrees_[i] + degrees_[j])
                    throw RingError("table entry is not homogeneous");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (table_[unit_][i] != basis(i) || table_[i][unit_] != basis(i))
            throw RingError("unit law fails");
        for (std::size_t j = 0; j < n; ++j) {
            RingElt flip = scale(Rat(parity_sign(degrees_[i], degrees_[j])), table_[j][i]);
            if (table_[i][j] != flip) throw RingError("sign rule fails");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                RingElt lhs = multiply(table_[i][j], basis(k));
                RingElt rhs = multiply(basis(i), table_[j][k]);
                if (lhs != rhs) throw RingError("associativity fails on basis triple");
            }
}

RingElt GradedRing::basis(std::size_t i) const {
    RingElt e = zero();
    e[i] = 1;
    return e;
}

std::vector<std::size_t> GradedRing::basis_of_degree(int d) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rank(); ++i)
        if (degrees_[i] == d) out.push_back(i);
    return out;
}

bool GradedRing::is_zero(const RingElt& x) const {
    for (const Rat& c : x)
        if (c != 0) return false;
    return true;
}

RingElt GradedRing::add(const RingElt& x, const RingElt& y) const {
    RingElt out = x;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += y[i];
    return out;
}

RingElt GradedRing::scale(const Rat& c, const RingElt& x) const {
    RingElt out = x;
    for (Rat& v : out) v *= c;
    return out;
}

RingElt GradedRing::multiply(const RingElt& x, const RingElt& y) const {
    RingElt out = zero();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j] == 0) continue;
            const Rat c = x[i] * y[j];
            const RingElt& e = table_[i][j];
            for (std::size_t k = 0; k < e.size(); ++k)
                if (e[k] != 0) out[k] += c * e[k];
        }
    }
    return out;
}

int GradedRing::homogeneous_degree(const RingElt& x) const {
    int d = -1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        if (d == -1)
            d = degrees_[i];
        else if (d != degrees_[i])
            return -1;
    }
    return d;
}

std::string GradedRing::describe(const RingElt& x) const {
    std::string out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        Rat c = x[i];
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        Rat a = c < 0 ? Rat(-c) : c;
        if (a != 1 || i == unit_) {
            out += rat_to_string(a);
            if (i != unit_) out += " ";
        }
        if (i != unit_) out += labels_[i];
    }
    return out.empty() ? "0" : out;
}

RingElt RingHom::apply(const RingElt& x) const {
    RingElt out(tgt->rank(), Rat(0));
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] == 0) continue;
        for (std::size_t i = 0; i < out.size(); ++i)
            if (m(i, j) != 0) out[i] += m(i, j) * x[j];
    }
    return out;
}

RingHom ring_hom(const GradedRing& src, const GradedRing& tgt, QMatrix m) {
    if (m.rows() != tgt.rank() || m.cols() != src.rank())
        throw RingError("hom matrix has the wrong shape");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0 && tgt.degree(i) != src.degree(j))
                throw RingError("hom does not preserve degree");
    RingHom phi{&src, &tgt, std::move(m)};
    if (phi.apply(src.one()) != tgt.one()) throw RingError("hom is not unital");
    for (std::size_t i = 0; i < src.rank(); ++i)
        for (std::size_t j = 0; j < src.rank(); ++j) {
            RingElt lhs = phi.apply(src.multiply(src.basis(i), src.basis(j)));
            RingElt rhs = tgt.multiply(phi.apply(src.basis(i)), phi.apply(src.basis(j)));
            if (lhs != rhs) throw RingError("hom is not multiplicative");
        }
    return phi;
}

GradedRing tensor_ring(const GradedRing& r1, const GradedRing& r2) {
    const std::size_t n1 = r1.rank(), n2 = r2.rank();
    auto index = [n2](std::size_t i, std::size_t j) { return i * n2 + j; };

    std::vector<std::string> labels(n1 * n2);
    std::vector<int> degrees(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            labels[index(i, j)] = r1.label(i) + "." + r2.label(j);
            degrees[index(i, j)] = r1.degree(i) + r2.degree(j);
        }

    std::vector<std::vector<RingElt>> table(
        n1 * n2, std::vector<RingElt>(n1 * n2, RingElt(n1 * n2, Rat(0))));
    for (std::size_t i1 = 0; i1 < n1; ++i1)
        for (std::size_t i2 = 0; i2 < n2; ++i2)
            for (std::size_t j1 = 0; j1 < n1; ++j1)
                for (std::size_t j2 = 0; j2 < n2; ++j2) {
                    int sign = parity_sign(r2.degree(i2), r1.degree(j1));
                    RingElt p1 = r1.multiply(r1.basis(i1), r1.basis(j1));
                    RingElt p2 = r2.multiply(r2.basis(i2), r2.basis(j2));
                    RingElt& out = table[index(i1, i2)][index(j1, j2)];
                    for (std::size_t k1 = 0; k1 < n1; ++k1) {
                        if (p1[k1] == 0) continue;
                        for (std::size_t k2 = 0; k2 < n2; ++k2)
                            if (p2[k2] != 0)
                                out[index(k1, k2)] = Rat(sign) * p1[k1] * p2[k2];
                    }
                }
    return GradedRing(std::move(labels), std::move(degrees),
                      index(r1.unit_index(), r2.unit_index()), std::move(table));
}

TensorSquare tensor_square(const GradedRing& r) {
    TensorSquare ts;
    ts.ring = std::make_shared<const GradedRing>(tensor_ring(r, r));
    ts.factor_rank = r.rank();
    const std::size_t n = r.rank(), nn = ts.ring->rank();

    QMatrix m1(nn, n), m2(nn, n), mm(n, nn);
    for (std::size_t i = 0; i < n; ++i) {
        m1(ts.index(i, r.unit_index()), i) = 1;
        m2(ts.index(r.unit_index(), i), i) = 1;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            RingElt p = r.multiply(r.basis(i), r.basis(j));
            for (std::size_t k = 0; k < n; ++k)
                if (p[k] != 0) mm(k, ts.index(i, j)) = p[k];
        }
    ts.incl1 = ring_hom(r, *ts.ring, std::move(m1));
    ts.incl2 = ring_hom(r, *ts.ring, std::move(m2));
    ts.mu = ring_hom(*ts.ring, r, std::move(mm));
    return ts;
}

Ideal kernel(const RingHom& phi) {
    Ideal out;
    out.ring = phi.src;
    for (int d = 0; d <= phi.src->top_degree(); ++d) {
        std::vector<std::size_t> idx = phi.src->basis_of_degree(d);
        if (idx.empty()) continue;
        QMatrix ker = phi.m.columns(idx).nullspace();
        for (std::size_t c = 0; c < ker.cols(); ++c) {
            RingElt g = phi.src->zero();
            for (std::size_t r = 0; r < idx.size(); ++r) g[idx[r]] = ker(r, c);
            out.gens.push_back(std::move(g));
        }
    }
    return out;
}

Ideal augmentation_ideal(const GradedRing& r) {
    Ideal out;
    out.ring = &r;
    for (std::size_t i = 0; i < r.rank(); ++i)
        if (r.degree(i) > 0) out.gens.push_back(r.basis(i));
    return out;
}

namespace {

struct CupSearch {
    const GradedRing& ring;
    const std::vector<std::pair<RingElt, int>>& gens;  // with degrees
    int cap;
    int best = 0;

    void walk(const RingElt& cur, int deg, int depth) {
        best = std::max(best, depth);
        if (depth == cap || best == cap) return;
        for (const auto& [g, gd] : gens) {
            if (deg + gd > ring.top_degree()) continue;
            RingElt p = ring.multiply(cur, g);
            if (!ring.is_zero(p)) walk(p, deg + gd, depth + 1);
        }
    }
};

}  // namespace

int ideal_cuplength(const Ideal& ideal, int cap) {
    if (cap < 1) throw RingError("cup length cap must be positive");
    const GradedRing& r = *ideal.ring;
    std::vector<std::pair<RingElt, int>> gens;
    for (const RingElt& g : ideal.gens) {
        if (r.is_zero(g)) continue;
        int d = r.homogeneous_degree(g);
        if (d < 0) throw RingError("ideal generator is not homogeneous");
        gens.emplace_back(g, d);
    }
    std::sort(gens.begin(), gens.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    CupSearch search{r, gens, cap};
    for (const auto& [g, gd] : gens) {
        search.walk(g, gd, 1);
        if (search.best == cap) break;
    }
    return search.best;
}

int cat_lower(const GradedRing& r, int cap) {
    return ideal_cuplength(augmentation_ideal(r), cap);
}

int secat_lower(const RingHom& phi, int cap) { return ideal_cuplength(kernel(phi), cap); }

int compl_lower(const GradedRing& r, int cap) {
    TensorSquare ts = tensor_square(r);
    return ideal_cuplength(kernel(ts.mu), cap);
}

namespace {

GradedRing sphere_ring(int n) {
    if (n < 1) throw RingError("sphere dimension must be positive");
    std::vector<std::vector<RingElt>> table(2, std::vector<RingElt>(2, RingElt(2, Rat(0))));
    table[0][0][0] = 1;
    table[0][1][1] = 1;
    table[1][0][1] = 1;
    return GradedRing({"1", "x"}, {0, n}, 0, std::move(table));
}

GradedRing cp_ring(int n) {
    if (n < 1) throw RingError("projective space dimension must be positive");
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    std::vector<std::string> labels{"1", "v"};
    std::vector<int> degrees{0, 2};
    for (int i = 2; i <= n; ++i) {
        labels.push_back("v" + std::to_string(i));
        degrees.push_back(2 * i);
    }
    std::vector<std::vector<RingElt>> table(m, std::vector<RingElt>(m, RingElt(m, Rat(0))));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i + j < m) table[i][j][i + j] = 1;
    return GradedRing(std::move(labels), std::move(degrees), 0, std::move(table));
}

// name(arg) or name(arg1,arg2) with balanced nesting; spaces are ignored.
std::vector<std::string> split_args(const std::string& body) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : body) {
        if (c == ' ') continue;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
            continue;
        }
        if (c == '(') ++depth;
        if (c == ')') --depth;
        cur += c;
    }
    out.push_back(cur);
    return out;
}

}  // namespace

GradedRing builtin_ring(const std::string& name) {
    std::string s;
    for (char c : name)
        if (c != ' ') s += c;
    std::size_t open = s.find('(');
    if (s.empty() || open == std::string::npos || s.back() != ')')
        throw RingError("unknown builtin ring: " + name);
    std::string head = s.substr(0, open);
    std::vector<std::string> args = split_args(s.substr(open + 1, s.size() - open - 2));
    try {
        if (head == "sphere" && args.size() == 1) return sphere_ring(std::stoi(args[0]));
        if (head == "cp" && args.size() == 1) return cp_ring(std::stoi(args[0]));
    } catch (const RingError&) {
        throw;
    } catch (const std::exception&) {
        throw RingError("unknown builtin ring: " + name);
    }
    if (head == "product" && args.size() == 2)
        return tensor_ring(builtin_ring(args[0]), builtin_ring(args[1]));
    throw RingError("unknown builtin ring: " + name);
}

}  // namespace secat
