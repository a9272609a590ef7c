#include "secat/chain.hpp"

#include <algorithm>

namespace secat {

namespace {

// Dims of a three-block space P_n = A_{n+ka} + B_{n+kb} + C_{n+kc}.
GradedDims block_dims(const GradedDims& a, int ka, const GradedDims& b, int kb,
                      const GradedDims& c, int kc) {
    int lo = std::min({a.lo() - ka, b.lo() - kb, c.lo() - kc});
    int hi = std::max({a.hi() - ka, b.hi() - kb, c.hi() - kc});
    if (hi < lo) return GradedDims();
    std::vector<int> dims;
    for (int n = lo; n <= hi; ++n)
        dims.push_back(a.dim(n + ka) + b.dim(n + kb) + c.dim(n + kc));
    return GradedDims(lo, dims);
}

QMatrix hcat3(const QMatrix& a, const QMatrix& b, const QMatrix& c) {
    return a.hcat(b).hcat(c);
}

QMatrix vcat3(const QMatrix& a, const QMatrix& b, const QMatrix& c) {
    return a.vcat(b).vcat(c);
}

std::size_t sz(int n) { return static_cast<std::size_t>(n); }

}  // namespace

SumParts direct_sum(const ChainComplex& X, const ChainComplex& Y) {
    GradedDims dims = block_dims(X.dims(), 0, Y.dims(), 0, GradedDims(), 0);
    GradedMap d(dims, dims, -1);
    for (int n = dims.lo(); n <= dims.hi(); ++n) {
        QMatrix dx = X.d().at(n), dy = Y.d().at(n);
        QMatrix top = dx.hcat(QMatrix(dx.rows(), dy.cols()));
        QMatrix bot = QMatrix(dy.rows(), dx.cols()).hcat(dy);
        d.set(n, top.vcat(bot));
    }
    SumParts r;
    r.sum = ChainComplex(dims, d);
    r.in1 = GradedMap(X.dims(), dims, 0);
    r.in2 = GradedMap(Y.dims(), dims, 0);
    r.pr1 = GradedMap(dims, X.dims(), 0);
    r.pr2 = GradedMap(dims, Y.dims(), 0);
    for (int n = dims.lo(); n <= dims.hi(); ++n) {
        std::size_t xn = sz(X.dim(n)), yn = sz(Y.dim(n));
        r.in1.set(n, QMatrix::identity(xn).vcat(QMatrix(yn, xn)));
        r.in2.set(n, QMatrix(xn, yn).vcat(QMatrix::identity(yn)));
        r.pr1.set(n, QMatrix::identity(xn).hcat(QMatrix(xn, yn)));
        r.pr2.set(n, QMatrix(yn, xn).hcat(QMatrix::identity(yn)));
    }
    return r;
}

CylinderParts cylinder(const ChainComplex& X) {
    GradedDims dims = block_dims(X.dims(), 0, X.dims(), 0, X.dims(), -1);
    GradedMap d(dims, dims, -1);
    for (int n = dims.lo(); n <= dims.hi(); ++n) {
        std::size_t an = sz(X.dim(n)), am = sz(X.dim(n - 1)), ak = sz(X.dim(n - 2));
        QMatrix dn = X.d().at(n), dm = X.d().at(n - 1);
        QMatrix row0 = hcat3(dn, QMatrix(am, an), -QMatrix::identity(am));
        QMatrix row1 = hcat3(QMatrix(am, an), dn, QMatrix::identity(am));
        QMatrix row2 = hcat3(QMatrix(ak, an), QMatrix(ak, an), -dm);
        d.set(n, vcat3(row0, row1, row2));
    }
    CylinderParts r;
    r.cyl = ChainComplex(dims, d);
    r.i0 = GradedMap(X.dims(), dims, 0);
    r.i1 = GradedMap(X.dims(), dims, 0);
    r.fold = GradedMap(dims, X.dims(), 0);
    r.h = GradedMap(X.dims(), dims, 1);
    for (int n = dims.lo(); n <= dims.hi(); ++n) {
        std::size_t an = sz(X.dim(n)), am = sz(X.dim(n - 1));
        r.i0.set(n, vcat3(QMatrix::identity(an), QMatrix(an, an), QMatrix(am, an)));
        r.i1.set(n, vcat3(QMatrix(an, an), QMatrix::identity(an), QMatrix(am, an)));
        r.fold.set(n, hcat3(QMatrix::identity(an), QMatrix::identity(an), QMatrix(an, am)));
    }
    for (int n = X.lo(); n <= X.hi(); ++n) {
        std::size_t an = sz(X.dim(n)), ap = sz(X.dim(n + 1));
        // into Cyl_{n+1} = X_{n+1} + X_{n+1} + X_n
        r.h.set(n, vcat3(QMatrix(ap, an), QMatrix(ap, an), QMatrix::identity(an)));
    }
    return r;
}

PathParts path_object(const ChainComplex& X) {
    GradedDims dims = block_dims(X.dims(), 0, X.dims(), 0, X.dims(), 1);
    GradedMap d(dims, dims, -1);
    for (int n = dims.lo(); n <= dims.hi(); ++n) {
        std::size_t an = sz(X.dim(n)), am = sz(X.dim(n - 1)), ap = sz(X.dim(n + 1));
        QMatrix dn = X.d().at(n), dp = X.d().at(n + 1);
        QMatrix row0 = hcat3(dn, QMatrix(am, an), QMatrix(am, ap));
        QMatrix row1 = hcat3(QMatrix(am, an), dn, QMatrix(am, ap));
        QMatrix row2 = hcat3(-QMatrix::identity(an), QMatrix::identity(an), -dp);
        d.set(n, vcat3(row0, row1, row2));
    }
    PathParts r;
    r.path = ChainComplex(dims, d);
    r.p0 = GradedMap(dims, X.dims(), 0);
    r.p1 = GradedMap(dims, X.dims(), 0);
    r.diag = GradedMap(X.dims(), dims, 0);
    r.h = GradedMap(dims, X.dims(), 1);
    for (int n = dims.lo(); n <= dims.hi(); ++n) {
        std::size_t an = sz(X.dim(n)), ap = sz(X.dim(n + 1));
        r.p0.set(n, hcat3(QMatrix::identity(an), QMatrix(an, an), QMatrix(an, ap)));
        r.p1.set(n, hcat3(QMatrix(an, an), QMatrix::identity(an), QMatrix(an, ap)));
        r.diag.set(n, vcat3(QMatrix::identity(an), QMatrix::identity(an), QMatrix(ap, an)));
        r.h.set(n, hcat3(QMatrix(ap, an), QMatrix(ap, an), QMatrix::identity(ap)));
    }
    return r;
}

DoubleCylParts double_cylinder(const ChainComplex& Z, const ChainComplex& A,
                               const ChainComplex& B, const GradedMap& u, const GradedMap& v) {
    if (!is_chain_map(Z, A, u) || !is_chain_map(Z, B, v))
        throw std::invalid_argument("double_cylinder: legs are not chain maps");
    GradedDims dims = block_dims(A.dims(), 0, B.dims(), 0, Z.dims(), -1);
    GradedMap d(dims, dims, -1);
    for (int n = dims.lo(); n <= dims.hi(); ++n) {
        std::size_t an = sz(A.dim(n)), am = sz(A.dim(n - 1));
        std::size_t bn = sz(B.dim(n)), bm = sz(B.dim(n - 1));
        std::size_t zn = sz(Z.dim(n - 1)), zm = sz(Z.dim(n - 2));
        QMatrix row0 = hcat3(A.d().at(n), QMatrix(am, bn), -u.at(n - 1));
        QMatrix row1 = hcat3(QMatrix(bm, an), B.d().at(n), v.at(n - 1));
        QMatrix row2 = hcat3(QMatrix(zm, an), QMatrix(zm, bn), -Z.d().at(n - 1));
        (void)zn;
        d.set(n, vcat3(row0, row1, row2));
    }
    DoubleCylParts r;
    r.apex = ChainComplex(dims, d);
    r.in_a = GradedMap(A.dims(), dims, 0);
    r.in_b = GradedMap(B.dims(), dims, 0);
    r.witness = GradedMap(Z.dims(), dims, 1);
    for (int n = dims.lo(); n <= dims.hi(); ++n) {
        std::size_t an = sz(A.dim(n)), bn = sz(B.dim(n)), zn = sz(Z.dim(n - 1));
        r.in_a.set(n, vcat3(QMatrix::identity(an), QMatrix(bn, an), QMatrix(zn, an)));
        r.in_b.set(n, vcat3(QMatrix(an, bn), QMatrix::identity(bn), QMatrix(zn, bn)));
    }
    for (int n = Z.lo(); n <= Z.hi(); ++n) {
        std::size_t an = sz(A.dim(n + 1)), bn = sz(B.dim(n + 1)), zn = sz(Z.dim(n));
        r.witness.set(n, vcat3(QMatrix(an, zn), QMatrix(bn, zn), QMatrix::identity(zn)));
    }
    return r;
}

HpbParts homotopy_pullback_apex(const ChainComplex& A, const ChainComplex& B,
                                const ChainComplex& X, const GradedMap& f, const GradedMap& g) {
    if (!is_chain_map(A, X, f) || !is_chain_map(B, X, g))
        throw std::invalid_argument("homotopy_pullback_apex: legs are not chain maps");
    GradedDims dims = block_dims(A.dims(), 0, B.dims(), 0, X.dims(), 1);
    GradedMap d(dims, dims, -1);
    for (int n = dims.lo(); n <= dims.hi(); ++n) {
        std::size_t an = sz(A.dim(n)), am = sz(A.dim(n - 1));
        std::size_t bn = sz(B.dim(n)), bm = sz(B.dim(n - 1));
        std::size_t xn = sz(X.dim(n)), xp = sz(X.dim(n + 1));
        QMatrix row0 = hcat3(A.d().at(n), QMatrix(am, bn), QMatrix(am, xp));
        QMatrix row1 = hcat3(QMatrix(bm, an), B.d().at(n), QMatrix(bm, xp));
        QMatrix row2 = hcat3(-f.at(n), g.at(n), -X.d().at(n + 1));
        (void)xn;
        d.set(n, vcat3(row0, row1, row2));
    }
    HpbParts r;
    r.apex = ChainComplex(dims, d);
    r.pr_a = GradedMap(dims, A.dims(), 0);
    r.pr_b = GradedMap(dims, B.dims(), 0);
    r.witness = GradedMap(dims, X.dims(), 1);
    for (int n = dims.lo(); n <= dims.hi(); ++n) {
        std::size_t an = sz(A.dim(n)), bn = sz(B.dim(n)), xp = sz(X.dim(n + 1));
        r.pr_a.set(n, hcat3(QMatrix::identity(an), QMatrix(an, bn), QMatrix(an, xp)));
        r.pr_b.set(n, hcat3(QMatrix(bn, an), QMatrix::identity(bn), QMatrix(bn, xp)));
        r.witness.set(n, hcat3(QMatrix(xp, an), QMatrix(xp, bn), QMatrix::identity(xp)));
    }
    return r;
}

GradedMap whisker_out(const DoubleCylParts& po, const ChainComplex& T, const GradedMap& f,
                      const GradedMap& g, const GradedMap& K) {
    const GradedDims& dims = po.apex.dims();
    const GradedDims& ad = po.in_a.src();
    const GradedDims& bd = po.in_b.src();
    const GradedDims& zd = po.witness.src();
    if (f.src() != ad || g.src() != bd || K.src() != zd || f.tgt() != T.dims() ||
        g.tgt() != T.dims() || K.tgt() != T.dims() || K.shift() != 1)
        throw std::invalid_argument("whisker_out: pieces do not fit the square");
    GradedMap j(dims, T.dims(), 0);
    for (int n = dims.lo(); n <= dims.hi(); ++n)
        j.set(n, hcat3(f.at(n), g.at(n), -K.at(n - 1)));
    return j;
}

GradedMap whisker_out_homotopy(const DoubleCylParts& po, const ChainComplex& T,
                               const GradedMap& sf, const GradedMap& sg) {
    const GradedDims& dims = po.apex.dims();
    const GradedDims& ad = po.in_a.src();
    const GradedDims& bd = po.in_b.src();
    const GradedDims& zd = po.witness.src();
    if (sf.src() != ad || sg.src() != bd || sf.tgt() != T.dims() || sg.tgt() != T.dims() ||
        sf.shift() != 1 || sg.shift() != 1)
        throw std::invalid_argument("whisker_out_homotopy: pieces do not fit the square");
    GradedMap W(dims, T.dims(), 1);
    for (int n = dims.lo(); n <= dims.hi(); ++n)
        W.set(n, hcat3(sf.at(n), sg.at(n),
                       QMatrix(sz(T.dim(n + 1)), sz(zd.dim(n - 1)))));
    return W;
}

GradedMap whisker_in(const HpbParts& pb, const ChainComplex& W, const GradedMap& p,
                     const GradedMap& q, const GradedMap& S) {
    const GradedDims& dims = pb.apex.dims();
    const GradedDims& ad = pb.pr_a.tgt();
    const GradedDims& bd = pb.pr_b.tgt();
    const GradedDims& xd = pb.witness.tgt();
    if (p.src() != W.dims() || q.src() != W.dims() || S.src() != W.dims() || p.tgt() != ad ||
        q.tgt() != bd || S.tgt() != xd || S.shift() != 1)
        throw std::invalid_argument("whisker_in: pieces do not fit the square");
    GradedMap w(W.dims(), dims, 0);
    for (int n = dims.lo(); n <= dims.hi(); ++n)
        w.set(n, vcat3(p.at(n), q.at(n), S.at(n)));
    return w;
}

Reduction minimize(const ChainComplex& X) {
    const int lo = X.lo(), hi = X.hi();
    // Pivot columns of d_n give a complement C_n of ker d_n; their images under
    // d_n are a basis of im d_n indexed the same way.
    std::map<int, std::vector<std::size_t>> piv;
    for (int n = lo; n <= hi + 1; ++n) {
        QMatrix dn = X.d().at(n);
        piv[n] = dn.rref();
    }

    std::map<int, QMatrix> T, Tinv;
    std::vector<int> hdims;
    for (int n = lo; n <= hi; ++n) {
        std::size_t dn = sz(X.dim(n));
        QMatrix C = QMatrix::identity(dn).columns(piv[n]);
        QMatrix B = X.d().at(n + 1) * QMatrix::identity(sz(X.dim(n + 1))).columns(piv[n + 1]);
        QMatrix K = X.d().at(n).nullspace();
        // Extend the boundary basis B to all of ker d_n; pivots landing in the
        // K block pick the homology representatives.
        QMatrix M = B.hcat(K);
        QMatrix Mr = M;
        std::vector<std::size_t> mp = Mr.rref();
        std::vector<std::size_t> hcols;
        for (std::size_t p : mp)
            if (p >= B.cols()) hcols.push_back(p);
        QMatrix H = M.columns(hcols);
        T[n] = hcat3(B, H, C);
        auto inv = T[n].inverse();
        if (!inv) throw std::logic_error("minimize: basis matrix singular");
        Tinv[n] = *inv;
        hdims.push_back(static_cast<int>(H.cols()));
    }

    GradedDims cdims(lo, hdims);
    Reduction r;
    r.core = ChainComplex(cdims);
    r.incl = GradedMap(cdims, X.dims(), 0);
    r.retr = GradedMap(X.dims(), cdims, 0);
    r.h = GradedMap(X.dims(), X.dims(), 1);
    for (int n = lo; n <= hi; ++n) {
        std::size_t bn = piv[n + 1].size();  // = dim B_n
        std::size_t hn = sz(cdims.dim(n));
        std::size_t dn = sz(X.dim(n));
        r.incl.set(n, T[n].submatrix(0, bn, dn, hn));
        r.retr.set(n, Tinv[n].submatrix(bn, 0, hn, dn));
        // h sends the boundary block of degree n to minus the pivot block of
        // degree n+1, inverting d there.
        if (n + 1 <= hi && bn > 0) {
            QMatrix Cnext = QMatrix::identity(sz(X.dim(n + 1))).columns(piv[n + 1]);
            QMatrix Brows = Tinv[n].submatrix(0, 0, bn, dn);
            r.h.set(n, -(Cnext * Brows));
        }
    }
    return r;
}

std::vector<int> homology_dims(const ChainComplex& X, int lo, int hi) {
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n) {
        int rk_n = static_cast<int>(X.d().at(n).rank());
        int rk_next = static_cast<int>(X.d().at(n + 1).rank());
        out.push_back(X.dim(n) - rk_n - rk_next);
    }
    return out;
}

std::optional<GradedMap> solve_homotopy(const GradedMap& f, const GradedMap& g,
                                        const Reduction& rx, const Reduction& ry) {
    GradedMap phi = f - g;
    GradedMap ind = induced_on_homology(phi, rx, ry);
    if (!ind.is_zero()) return std::nullopt;
    // s = -h_Y phi - incl_Y retr_Y phi h_X null-homotopes phi when the induced
    // map vanishes.
    GradedMap s = -compose(ry.h, phi) -
                  compose(ry.incl, compose(ry.retr, compose(phi, rx.h)));
    return s;
}

std::optional<GradedMap> solve_homotopy(const ChainComplex& X, const ChainComplex& Y,
                                        const GradedMap& f, const GradedMap& g) {
    return solve_homotopy(f, g, minimize(X), minimize(Y));
}

std::optional<GradedMap> solve_section(const GradedMap& g, const Reduction& rg,
                                       const Reduction& rx) {
    GradedMap ind = induced_on_homology(g, rg, rx);
    GradedMap sigma_core(rx.core.dims(), rg.core.dims(), 0);
    for (int n = ind.deg_lo(); n <= ind.deg_hi(); ++n) {
        auto ri = ind.at(n).right_inverse();
        if (!ri) return std::nullopt;
        sigma_core.set(n, *ri);
    }
    return compose(rg.incl, compose(sigma_core, rx.retr));
}

std::optional<GradedMap> solve_section(const ChainComplex& G, const ChainComplex& X,
                                       const GradedMap& g) {
    return solve_section(g, minimize(G), minimize(X));
}

std::optional<GradedMap> solve_rel_section(const GradedMap& g, const GradedMap& iota,
                                           const GradedMap& alpha, const Reduction& rg,
                                           const Reduction& rx, const Reduction& ra) {
    GradedMap hg = induced_on_homology(g, rg, rx);
    GradedMap hi = induced_on_homology(iota, ra, rx);
    GradedMap ha = induced_on_homology(alpha, ra, rg);
    int lo = std::min({hg.deg_lo(), hi.deg_lo(), ha.deg_lo()});
    int hi_deg = std::max({hg.deg_hi(), hi.deg_hi(), ha.deg_hi()});
    GradedMap sigma_core(rx.core.dims(), rg.core.dims(), 0);
    for (int n = lo; n <= hi_deg; ++n) {
        QMatrix Gm = hg.at(n);                     // k x m
        QMatrix P = hi.at(n);                      // k x a
        QMatrix Q = ha.at(n);                      // m x a
        std::size_t m = Gm.cols(), k = Gm.rows();
        // Unknown S is m x k with G S = I and S P = Q; solve the stacked
        // vectorized affine system.
        QMatrix lhs1 = kron(QMatrix::identity(k), Gm);
        QMatrix lhs2 = kron(P.transpose(), QMatrix::identity(m));
        QMatrix rhs = vec(QMatrix::identity(k)).vcat(vec(Q));
        auto sol = lhs1.vcat(lhs2).solve(rhs);
        if (!sol) return std::nullopt;
        sigma_core.set(n, unvec(*sol, m, k));
    }
    return compose(rg.incl, compose(sigma_core, rx.retr));
}

std::optional<GradedMap> solve_rel_section(const ChainComplex& G, const ChainComplex& X,
                                           const ChainComplex& A, const GradedMap& g,
                                           const GradedMap& iota, const GradedMap& alpha) {
    return solve_rel_section(g, iota, alpha, minimize(G), minimize(X), minimize(A));
}

std::optional<GradedMap> solve_lift(const GradedMap& g, const GradedMap& f,
                                    const Reduction& rg, const Reduction& rx,
                                    const Reduction& ry) {
    GradedMap hg = induced_on_homology(g, rg, rx);
    GradedMap hf = induced_on_homology(f, ry, rx);
    int lo = std::min(hg.deg_lo(), hf.deg_lo());
    int hi = std::max(hg.deg_hi(), hf.deg_hi());
    GradedMap phi_core(ry.core.dims(), rg.core.dims(), 0);
    for (int n = lo; n <= hi; ++n) {
        auto sol = hg.at(n).solve(hf.at(n));
        if (!sol) return std::nullopt;
        phi_core.set(n, *sol);
    }
    return compose(rg.incl, compose(phi_core, ry.retr));
}

std::optional<GradedMap> solve_lift(const ChainComplex& G, const ChainComplex& X,
                                    const ChainComplex& Y, const GradedMap& g,
                                    const GradedMap& f) {
    return solve_lift(g, f, minimize(G), minimize(X), minimize(Y));
}

std::optional<GradedMap> solve_rel_lift(const GradedMap& g, const GradedMap& f,
                                        const GradedMap& iota, const GradedMap& tau,
                                        const Reduction& rg, const Reduction& rx,
                                        const Reduction& ry, const Reduction& ra) {
    GradedMap hg = induced_on_homology(g, rg, rx);     // x_n by m_n
    GradedMap hf = induced_on_homology(f, ry, rx);     // x_n by y_n
    GradedMap hi = induced_on_homology(iota, ra, ry);  // y_n by a_n
    GradedMap ht = induced_on_homology(tau, ra, rg);   // m_n by a_n
    int lo = std::min({hg.deg_lo(), hf.deg_lo(), hi.deg_lo(), ht.deg_lo()});
    int hi_deg = std::max({hg.deg_hi(), hf.deg_hi(), hi.deg_hi(), ht.deg_hi()});
    GradedMap phi_core(ry.core.dims(), rg.core.dims(), 0);
    for (int n = lo; n <= hi_deg; ++n) {
        QMatrix Gm = hg.at(n);
        QMatrix Fm = hf.at(n);
        QMatrix P = hi.at(n);
        QMatrix Q = ht.at(n);
        std::size_t m = Gm.cols(), y = Fm.cols();
        // Unknown Phi is m x y with G Phi = F and Phi P = Q.
        QMatrix lhs1 = kron(QMatrix::identity(y), Gm);
        QMatrix lhs2 = kron(P.transpose(), QMatrix::identity(m));
        QMatrix rhs = vec(Fm).vcat(vec(Q));
        auto sol = lhs1.vcat(lhs2).solve(rhs);
        if (!sol) return std::nullopt;
        phi_core.set(n, unvec(*sol, m, y));
    }
    return compose(rg.incl, compose(phi_core, ry.retr));
}

std::optional<GradedMap> solve_rel_lift(const ChainComplex& G, const ChainComplex& X,
                                        const ChainComplex& Y, const ChainComplex& A,
                                        const GradedMap& g, const GradedMap& f,
                                        const GradedMap& iota, const GradedMap& tau) {
    return solve_rel_lift(g, f, iota, tau, minimize(G), minimize(X), minimize(Y),
                          minimize(A));
}

bool is_quasi_iso(const GradedMap& f, const Reduction& rx, const Reduction& ry) {
    GradedMap ind = induced_on_homology(f, rx, ry);
    for (int n = ind.deg_lo(); n <= ind.deg_hi(); ++n) {
        QMatrix m = ind.at(n);
        if (m.rows() != m.cols()) return false;
        if (m.rank() != m.rows()) return false;
    }
    return true;
}

bool is_quasi_iso(const ChainComplex& X, const ChainComplex& Y, const GradedMap& f) {
    return is_quasi_iso(f, minimize(X), minimize(Y));
}

std::optional<GradedMap> solve_inverse(const GradedMap& f, const Reduction& rx,
                                       const Reduction& ry) {
    GradedMap ind = induced_on_homology(f, rx, ry);
    GradedMap inv_core(ry.core.dims(), rx.core.dims(), 0);
    for (int n = ind.deg_lo(); n <= ind.deg_hi(); ++n) {
        auto mi = ind.at(n).inverse();
        if (!mi) return std::nullopt;
        inv_core.set(n, *mi);
    }
    return compose(rx.incl, compose(inv_core, ry.retr));
}

std::optional<GradedMap> solve_inverse(const ChainComplex& X, const ChainComplex& Y,
                                       const GradedMap& f) {
    return solve_inverse(f, minimize(X), minimize(Y));
}

}  // namespace secat
