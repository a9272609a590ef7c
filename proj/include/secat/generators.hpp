// Random instances for the test suites: bounded complexes with prescribed
// homology, chain maps with prescribed induced map, homotopies, and invertible
// change-of-basis matrices. Everything is driven by a caller-owned mt19937 so
// suites are reproducible.
#pragma once

#include "secat/chain.hpp"

#include <random>

namespace secat {

inline QMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols,
                             int amplitude = 2) {
    std::uniform_int_distribution<int> val(-amplitude, amplitude);
    QMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = val(rng);
    return m;
}

inline QMatrix random_invertible(std::mt19937& rng, std::size_t n) {
    std::uniform_int_distribution<int> val(-2, 2);
    QMatrix m = QMatrix::identity(n);
    if (n < 2) return m;
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    for (std::size_t step = 0; step < 3 * n; ++step) {
        std::size_t i = idx(rng), j = idx(rng);
        if (i == j) continue;
        Rat c = val(rng);
        for (std::size_t k = 0; k < n; ++k) m(i, k) += c * m(j, k);
    }
    return m;
}

struct RandomComplex {
    ChainComplex X;
    std::vector<int> homology;  // by degree, starting at lo
    int lo = 0;
};

// Builds a complex in canonical boundary/homology/pair form and conjugates by
// random invertible matrices, so the homology profile is known exactly.
inline RandomComplex random_complex(std::mt19937& rng, int lo, int hi, int max_h = 2,
                                    int max_pairs = 2) {
    std::uniform_int_distribution<int> hdist(0, max_h);
    std::uniform_int_distribution<int> bdist(0, max_pairs);
    int span = hi - lo + 1;
    std::vector<int> h(static_cast<std::size_t>(span)), b(static_cast<std::size_t>(span), 0);
    for (int k = 0; k < span; ++k) h[static_cast<std::size_t>(k)] = hdist(rng);
    for (int k = 0; k + 1 < span; ++k) b[static_cast<std::size_t>(k)] = bdist(rng);

    auto dim_at = [&](int k) {
        int bk = (k >= 0 && k < span) ? b[static_cast<std::size_t>(k)] : 0;
        int hk = (k >= 0 && k < span) ? h[static_cast<std::size_t>(k)] : 0;
        int ck = (k - 1 >= 0 && k - 1 < span) ? b[static_cast<std::size_t>(k - 1)] : 0;
        return bk + hk + ck;
    };

    std::vector<int> dims;
    for (int k = 0; k < span; ++k) dims.push_back(dim_at(k));
    GradedDims gd(lo, dims);

    std::vector<QMatrix> T(static_cast<std::size_t>(span)), Tinv(static_cast<std::size_t>(span));
    for (int k = 0; k < span; ++k) {
        T[static_cast<std::size_t>(k)] =
            random_invertible(rng, static_cast<std::size_t>(dim_at(k)));
        Tinv[static_cast<std::size_t>(k)] = *T[static_cast<std::size_t>(k)].inverse();
    }

    GradedMap d(gd, gd, -1);
    for (int k = 1; k < span; ++k) {
        // canonical d: pair block of degree k maps onto boundary block below
        std::size_t rows = static_cast<std::size_t>(dim_at(k - 1));
        std::size_t cols = static_cast<std::size_t>(dim_at(k));
        std::size_t nb = static_cast<std::size_t>(b[static_cast<std::size_t>(k - 1)]);
        QMatrix can(rows, cols);
        std::size_t col0 = cols - nb;  // pair block sits last
        for (std::size_t i = 0; i < nb; ++i) can(i, col0 + i) = 1;
        d.set(lo + k, T[static_cast<std::size_t>(k - 1)] * can * Tinv[static_cast<std::size_t>(k)]);
    }
    RandomComplex out;
    out.X = ChainComplex(gd, d);
    out.homology = h;
    out.lo = lo;
    return out;
}

inline GradedMap random_graded(std::mt19937& rng, const GradedDims& src, const GradedDims& tgt,
                               int shift, int amplitude = 2) {
    GradedMap t(src, tgt, shift);
    for (int n = t.deg_lo(); n <= t.deg_hi(); ++n)
        t.set(n, random_matrix(rng, static_cast<std::size_t>(tgt.dim(n + shift)),
                               static_cast<std::size_t>(src.dim(n)), amplitude));
    return t;
}

// incl_Y R retr_X + d t + t d: a chain map whose induced map on homology is
// exactly R; with random R and t this reaches every homotopy class.
inline GradedMap chain_map_with_induced(const ChainComplex& X, const ChainComplex& Y,
                                        const Reduction& rx, const Reduction& ry,
                                        const GradedMap& R, const GradedMap& t) {
    GradedMap f = compose(ry.incl, compose(R, rx.retr));
    return f + compose(Y.d(), t) + compose(t, X.d());
}

inline GradedMap random_chain_map(std::mt19937& rng, const ChainComplex& X,
                                  const ChainComplex& Y, const Reduction& rx,
                                  const Reduction& ry) {
    GradedMap R = random_graded(rng, rx.core.dims(), ry.core.dims(), 0);
    GradedMap t = random_graded(rng, X.dims(), Y.dims(), 1);
    return chain_map_with_induced(X, Y, rx, ry, R, t);
}

inline GradedMap random_chain_map(std::mt19937& rng, const ChainComplex& X,
                                  const ChainComplex& Y) {
    Reduction rx = minimize(X);
    Reduction ry = minimize(Y);
    return random_chain_map(rng, X, Y, rx, ry);
}

}  // namespace secat
