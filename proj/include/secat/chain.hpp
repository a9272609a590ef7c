// Bounded chain complexes of finite-dimensional rational vector spaces, with
// the constructions the homotopy backend is built from: cylinders, path
// objects, double mapping cylinders, homotopy pullback apexes, whisker maps,
// minimization (homotopy-equivalent zero-differential core) and the solvers
// that make homotopy/section existence decidable.
//
// Grading is homological: d lowers degree by one. A homotopy s from f to g
// raises degree by one and satisfies d s + s d = f - g.
#pragma once

#include "secat/matrix.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace secat {

// ---------------------------------------------------------------------------
// Graded dimensions

class GradedDims {
public:
    GradedDims() : lo_(0) {}
    GradedDims(int lo, std::vector<int> dims) : lo_(lo), d_(std::move(dims)) { trim(); }

    int dim(int n) const {
        if (n < lo_ || n >= lo_ + static_cast<int>(d_.size())) return 0;
        return d_[static_cast<std::size_t>(n - lo_)];
    }
    bool is_zero() const { return d_.empty(); }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(d_.size()) - 1; }  // < lo() when zero
    int total() const {
        int t = 0;
        for (int x : d_) t += x;
        return t;
    }

    GradedDims shifted(int k) const { return GradedDims(lo_ + k, d_); }

    bool operator==(const GradedDims& o) const { return lo_ == o.lo_ && d_ == o.d_; }
    bool operator!=(const GradedDims& o) const { return !(*this == o); }

private:
    void trim() {
        while (!d_.empty() && d_.back() == 0) d_.pop_back();
        while (!d_.empty() && d_.front() == 0) {
            d_.erase(d_.begin());
            ++lo_;
        }
        if (d_.empty()) lo_ = 0;
        for (int x : d_)
            if (x < 0) throw std::invalid_argument("negative graded dimension");
    }

    int lo_;
    std::vector<int> d_;
};

// ---------------------------------------------------------------------------
// Degree-homogeneous linear maps

// Component at degree n maps src_n -> tgt_{n+shift}. Chain maps have shift 0,
// homotopies shift +1, differentials shift -1. Unset components are zero.
class GradedMap {
public:
    GradedMap() : shift_(0) {}
    GradedMap(GradedDims src, GradedDims tgt, int shift)
        : shift_(shift), src_(std::move(src)), tgt_(std::move(tgt)) {}

    int shift() const { return shift_; }
    const GradedDims& src() const { return src_; }
    const GradedDims& tgt() const { return tgt_; }

    QMatrix at(int n) const {
        auto it = m_.find(n);
        if (it != m_.end()) return it->second;
        return QMatrix(static_cast<std::size_t>(tgt_.dim(n + shift_)),
                       static_cast<std::size_t>(src_.dim(n)));
    }

    void set(int n, QMatrix mat) {
        if (mat.rows() != static_cast<std::size_t>(tgt_.dim(n + shift_)) ||
            mat.cols() != static_cast<std::size_t>(src_.dim(n)))
            throw std::invalid_argument("graded map component shape mismatch at degree " +
                                        std::to_string(n));
        if (mat.rows() == 0 || mat.cols() == 0 || mat.is_zero()) {
            m_.erase(n);
            return;
        }
        m_[n] = std::move(mat);
    }

    bool is_zero() const {
        for (const auto& [n, mat] : m_)
            if (!mat.is_zero()) return false;
        return true;
    }

    // Degrees where either endpoint may be nonzero.
    int deg_lo() const { return std::min(src_.lo(), tgt_.lo() - shift_); }
    int deg_hi() const { return std::max(src_.hi(), tgt_.hi() - shift_); }

    bool operator==(const GradedMap& o) const {
        if (shift_ != o.shift_ || src_ != o.src_ || tgt_ != o.tgt_) return false;
        for (int n = deg_lo(); n <= deg_hi(); ++n)
            if (at(n) != o.at(n)) return false;
        return true;
    }
    bool operator!=(const GradedMap& o) const { return !(*this == o); }

    GradedMap operator+(const GradedMap& o) const {
        require_parallel(o, "graded map add");
        GradedMap r(src_, tgt_, shift_);
        for (int n = deg_lo(); n <= deg_hi(); ++n) r.set(n, at(n) + o.at(n));
        return r;
    }
    GradedMap operator-(const GradedMap& o) const {
        require_parallel(o, "graded map sub");
        GradedMap r(src_, tgt_, shift_);
        for (int n = deg_lo(); n <= deg_hi(); ++n) r.set(n, at(n) - o.at(n));
        return r;
    }
    GradedMap operator-() const {
        GradedMap r(src_, tgt_, shift_);
        for (const auto& [n, mat] : m_) r.set(n, -mat);
        return r;
    }
    GradedMap operator*(const Rat& c) const {
        GradedMap r(src_, tgt_, shift_);
        for (const auto& [n, mat] : m_) r.set(n, mat * c);
        return r;
    }

private:
    void require_parallel(const GradedMap& o, const char* what) const {
        if (shift_ != o.shift_ || src_ != o.src_ || tgt_ != o.tgt_)
            throw std::invalid_argument(std::string(what) + ": maps not parallel");
    }

    int shift_;
    GradedDims src_, tgt_;
    std::map<int, QMatrix> m_;
};

// g after f (degree bookkeeping: result component at n is g(n + f.shift) * f(n)).
inline GradedMap compose(const GradedMap& g, const GradedMap& f) {
    if (g.src() != f.tgt()) throw std::invalid_argument("compose: middle spaces differ");
    GradedMap r(f.src(), g.tgt(), f.shift() + g.shift());
    for (int n = r.deg_lo(); n <= r.deg_hi(); ++n) r.set(n, g.at(n + f.shift()) * f.at(n));
    return r;
}

inline GradedMap identity_graded(const GradedDims& d) {
    GradedMap r(d, d, 0);
    for (int n = d.lo(); n <= d.hi(); ++n)
        r.set(n, QMatrix::identity(static_cast<std::size_t>(d.dim(n))));
    return r;
}

inline GradedMap zero_graded(const GradedDims& src, const GradedDims& tgt, int shift = 0) {
    return GradedMap(src, tgt, shift);
}

// ---------------------------------------------------------------------------
// Chain complexes

class ChainComplex {
public:
    ChainComplex() : d_(GradedDims(), GradedDims(), -1) {}
    explicit ChainComplex(GradedDims dims) : dims_(dims), d_(dims, dims, -1) {}
    ChainComplex(GradedDims dims, GradedMap d) : dims_(dims), d_(std::move(d)) {
        if (d_.shift() != -1 || d_.src() != dims_ || d_.tgt() != dims_)
            throw std::invalid_argument("differential must be a degree -1 endomap");
    }

    const GradedDims& dims() const { return dims_; }
    const GradedMap& d() const { return d_; }
    int dim(int n) const { return dims_.dim(n); }
    int lo() const { return dims_.lo(); }
    int hi() const { return dims_.hi(); }
    int total_dim() const { return dims_.total(); }
    bool is_zero_object() const { return dims_.is_zero(); }

    void set_d(int n, QMatrix mat) { d_.set(n, std::move(mat)); }

    bool valid() const {
        GradedMap dd = compose(d_, d_);
        return dd.is_zero();
    }

    bool operator==(const ChainComplex& o) const { return dims_ == o.dims_ && d_ == o.d_; }

private:
    GradedDims dims_;
    GradedMap d_;
};

inline ChainComplex zero_complex() { return ChainComplex(); }

// Single rational summand in the given degree. This is the reduced model of a
// sphere: its suspension is the model one degree up.
inline ChainComplex sphere_complex(int degree) {
    return ChainComplex(GradedDims(degree, {1}));
}

inline bool is_chain_map(const ChainComplex& X, const ChainComplex& Y, const GradedMap& f) {
    if (f.shift() != 0 || f.src() != X.dims() || f.tgt() != Y.dims()) return false;
    return compose(Y.d(), f) == compose(f, X.d());
}

// d_Y s + s d_X = f - g?
inline bool is_homotopy_witness(const ChainComplex& X, const ChainComplex& Y, const GradedMap& s,
                                const GradedMap& f, const GradedMap& g) {
    if (s.shift() != 1 || s.src() != X.dims() || s.tgt() != Y.dims()) return false;
    return compose(Y.d(), s) + compose(s, X.d()) == f - g;
}

// ---------------------------------------------------------------------------
// Shift, sums, products of maps

// (X[k])_n = X_{n-k} with differential (-1)^k d.
inline ChainComplex shift_complex(const ChainComplex& X, int k) {
    GradedDims dims = X.dims().shifted(k);
    GradedMap d(dims, dims, -1);
    const Rat sign = (k % 2 == 0) ? 1 : -1;
    for (int n = X.lo(); n <= X.hi(); ++n) d.set(n + k, X.d().at(n) * sign);
    return ChainComplex(dims, d);
}

inline GradedMap shift_map(const GradedMap& f, int k) {
    GradedMap r(f.src().shifted(k), f.tgt().shifted(k), f.shift());
    for (int n = f.deg_lo(); n <= f.deg_hi(); ++n) r.set(n + k, f.at(n));
    return r;
}

struct SumParts {
    ChainComplex sum;
    GradedMap in1, in2;   // X -> sum, Y -> sum
    GradedMap pr1, pr2;   // sum -> X, sum -> Y
};

// Degreewise direct sum; simultaneously the product and the coproduct here.
SumParts direct_sum(const ChainComplex& X, const ChainComplex& Y);

// Block-diagonal f + g on direct sums built with direct_sum order.
inline GradedMap sum_map(const SumParts& src, const SumParts& tgt, const GradedMap& f,
                         const GradedMap& g) {
    return compose(tgt.in1, compose(f, src.pr1)) + compose(tgt.in2, compose(g, src.pr2));
}

// ---------------------------------------------------------------------------
// Cylinder and path object

struct CylinderParts {
    ChainComplex cyl;
    GradedMap i0, i1;   // X -> Cyl
    GradedMap fold;     // Cyl -> X
    GradedMap h;        // homotopy, d h + h d = i1 - i0
};

// Cyl(X)_n = X_n + X_n + X_{n-1}, d(a0, a1, s) = (da0 - s, da1 + s, -ds).
CylinderParts cylinder(const ChainComplex& X);

struct PathParts {
    ChainComplex path;
    GradedMap p0, p1;   // X^I -> X
    GradedMap diag;     // X -> X^I, constant paths
    GradedMap h;        // d h + h d = p1 - p0
};

// (X^I)_n = X_n + X_n + X_{n+1}, d(x0, x1, t) = (dx0, dx1, x1 - x0 - dt).
PathParts path_object(const ChainComplex& X);

// ---------------------------------------------------------------------------
// Double mapping cylinder and homotopy pullback apex

struct DoubleCylParts {
    ChainComplex apex;       // A + B + Z[1]
    GradedMap in_a, in_b;    // A -> apex, B -> apex
    GradedMap witness;       // d H + H d = in_b v - in_a u; H(z) = (0,0,z)
};

// Homotopy pushout of u: Z -> A, v: Z -> B.
// d(a, b, z) = (da - u z, db + v z, -dz).
DoubleCylParts double_cylinder(const ChainComplex& Z, const ChainComplex& A,
                               const ChainComplex& B, const GradedMap& u, const GradedMap& v);

struct HpbParts {
    ChainComplex apex;       // A + B + X[-1]
    GradedMap pr_a, pr_b;    // apex -> A, apex -> B
    GradedMap witness;       // d S + S d = g pr_b - f pr_a; S(a,b,t) = t
};

// Homotopy pullback of f: A -> X, g: B -> X.
// d(a, b, t) = (da, db, g b - f a - dt).
HpbParts homotopy_pullback_apex(const ChainComplex& A, const ChainComplex& B,
                                const ChainComplex& X, const GradedMap& f, const GradedMap& g);

// Cone(f) = homotopy pushout of f along X -> 0; acyclic iff f is a
// quasi-isomorphism.
inline ChainComplex mapping_cone(const ChainComplex& X, const ChainComplex& Y,
                                 const GradedMap& f) {
    DoubleCylParts po = double_cylinder(X, Y, zero_complex(), f,
                                        zero_graded(X.dims(), GradedDims()));
    return po.apex;
}

// j(a, b, z) = f a + g b - K z, for K with d K + K d = f u - g v.
GradedMap whisker_out(const DoubleCylParts& po, const ChainComplex& T, const GradedMap& f,
                      const GradedMap& g, const GradedMap& K);

// W(a, b, z) = sf a + sg b: candidate homotopy between two whiskered cocones
// whose legs are deformed by sf and sg. Valid exactly when the keys match up.
GradedMap whisker_out_homotopy(const DoubleCylParts& po, const ChainComplex& T,
                               const GradedMap& sf, const GradedMap& sg);

// w(x) = (p x, q x, S x), for S with d S + S d = g q - f p.
GradedMap whisker_in(const HpbParts& pb, const ChainComplex& W, const GradedMap& p,
                     const GradedMap& q, const GradedMap& S);

// ---------------------------------------------------------------------------
// Minimization (homotopy-equivalent zero-differential core)

struct Reduction {
    ChainComplex core;   // zero differential, dims = homology dims
    GradedMap incl;      // core -> X, columns are cycle representatives
    GradedMap retr;      // X -> core, retr incl = id
    GradedMap h;         // d h + h d = incl retr - id_X
};

Reduction minimize(const ChainComplex& X);

// Betti numbers by the rank formula; independent of minimize's basis choices.
std::vector<int> homology_dims(const ChainComplex& X, int lo, int hi);

// retr_Y f incl_X; between zero-differential cores a graded map is a chain map
// and homotopy classes of maps X -> Y biject with such matrices.
inline GradedMap induced_on_homology(const GradedMap& f, const Reduction& rx,
                                     const Reduction& ry) {
    return compose(ry.retr, compose(f, rx.incl));
}

// ---------------------------------------------------------------------------
// Decision procedures (complete over the rationals)

// Witness for f = g up to homotopy, if one exists. The overloads taking
// reductions reuse precomputed minimizations.
std::optional<GradedMap> solve_homotopy(const GradedMap& f, const GradedMap& g,
                                        const Reduction& rx, const Reduction& ry);
std::optional<GradedMap> solve_homotopy(const ChainComplex& X, const ChainComplex& Y,
                                        const GradedMap& f, const GradedMap& g);

// sigma with g sigma homotopic to id; exists iff H(g) is degreewise onto.
std::optional<GradedMap> solve_section(const GradedMap& g, const Reduction& rg,
                                       const Reduction& rx);
std::optional<GradedMap> solve_section(const ChainComplex& G, const ChainComplex& X,
                                       const GradedMap& g);

// sigma with g sigma ~ id and sigma iota ~ alpha; requires g alpha ~ iota.
// Exists iff the affine system {H(g) S = I, S H(iota) = H(alpha)} is feasible.
std::optional<GradedMap> solve_rel_section(const GradedMap& g, const GradedMap& iota,
                                           const GradedMap& alpha, const Reduction& rg,
                                           const Reduction& rx, const Reduction& ra);
std::optional<GradedMap> solve_rel_section(const ChainComplex& G, const ChainComplex& X,
                                           const ChainComplex& A, const GradedMap& g,
                                           const GradedMap& iota, const GradedMap& alpha);

// phi with g phi ~ f, i.e. f factors through g up to homotopy; exists iff
// H(f) lands degreewise in the column space of H(g). Taking f = id recovers
// solve_section.
std::optional<GradedMap> solve_lift(const GradedMap& g, const GradedMap& f,
                                    const Reduction& rg, const Reduction& rx,
                                    const Reduction& ry);
std::optional<GradedMap> solve_lift(const ChainComplex& G, const ChainComplex& X,
                                    const ChainComplex& Y, const GradedMap& g,
                                    const GradedMap& f);

// phi with g phi ~ f and phi iota ~ tau, for iota: A -> Y and tau: A -> G.
std::optional<GradedMap> solve_rel_lift(const GradedMap& g, const GradedMap& f,
                                        const GradedMap& iota, const GradedMap& tau,
                                        const Reduction& rg, const Reduction& rx,
                                        const Reduction& ry, const Reduction& ra);
std::optional<GradedMap> solve_rel_lift(const ChainComplex& G, const ChainComplex& X,
                                        const ChainComplex& Y, const ChainComplex& A,
                                        const GradedMap& g, const GradedMap& f,
                                        const GradedMap& iota, const GradedMap& tau);

bool is_quasi_iso(const GradedMap& f, const Reduction& rx, const Reduction& ry);
bool is_quasi_iso(const ChainComplex& X, const ChainComplex& Y, const GradedMap& f);

// Two-sided homotopy inverse, if f is a homotopy equivalence.
std::optional<GradedMap> solve_inverse(const GradedMap& f, const Reduction& rx,
                                       const Reduction& ry);
std::optional<GradedMap> solve_inverse(const ChainComplex& X, const ChainComplex& Y,
                                       const GradedMap& f);

}  // namespace secat
