// Dense matrices over the rationals with the exact solvers the chain layer
// needs: RREF, rank, nullspace, linear systems, inverses. Everything is exact;
// solvers return the canonical solution with free variables set to zero.
#pragma once

#include "secat/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace secat {

class QMatrix {
public:
    QMatrix() : rows_(0), cols_(0) {}
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static QMatrix identity(std::size_t n) {
        QMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static QMatrix zero(std::size_t rows, std::size_t cols) { return QMatrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const QMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const QMatrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : a_)
            if (x != 0) return false;
        return true;
    }

    QMatrix operator+(const QMatrix& o) const {
        check_same_shape(o, "matrix add");
        QMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }
    QMatrix operator-(const QMatrix& o) const {
        check_same_shape(o, "matrix sub");
        QMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }
    QMatrix operator-() const {
        QMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
        return r;
    }
    QMatrix operator*(const Rat& c) const {
        QMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
        return r;
    }
    QMatrix operator*(const QMatrix& o) const {
        if (cols_ != o.rows_)
            throw std::invalid_argument("matrix mul shape " + shape_str() + " * " + o.shape_str());
        QMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rat& aik = (*this)(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    const Rat& bkj = o(k, j);
                    if (bkj != 0) r(i, j) += aik * bkj;
                }
            }
        return r;
    }

    QMatrix transpose() const {
        QMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    // [this | o] side by side.
    QMatrix hcat(const QMatrix& o) const {
        if (rows_ != o.rows_) throw std::invalid_argument("hcat row mismatch");
        QMatrix r(rows_, cols_ + o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, cols_ + j) = o(i, j);
        }
        return r;
    }
    QMatrix vcat(const QMatrix& o) const {
        if (cols_ != o.cols_) throw std::invalid_argument("vcat col mismatch");
        QMatrix r(rows_ + o.rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
        for (std::size_t i = 0; i < o.rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(rows_ + i, j) = o(i, j);
        return r;
    }

    QMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        QMatrix r(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
        return r;
    }

    QMatrix columns(const std::vector<std::size_t>& idx) const {
        QMatrix r(rows_, idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j)
            for (std::size_t i = 0; i < rows_; ++i) r(i, j) = (*this)(i, idx[j]);
        return r;
    }

    // In-place reduced row echelon form; returns pivot column indices.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
            std::size_t p = row;
            while (p < rows_ && (*this)(p, col) == 0) ++p;
            if (p == rows_) continue;
            if (p != row)
                for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(p, j), (*this)(row, j));
            Rat inv = 1 / (*this)(row, col);
            for (std::size_t j = col; j < cols_; ++j) (*this)(row, j) *= inv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == row) continue;
                const Rat f = (*this)(i, col);
                if (f == 0) continue;
                for (std::size_t j = col; j < cols_; ++j) (*this)(i, j) -= f * (*this)(row, j);
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    std::size_t rank() const {
        QMatrix m = *this;
        return m.rref().size();
    }

    // Columns spanning the kernel, or an n x 0 matrix if injective.
    QMatrix nullspace() const {
        QMatrix m = *this;
        std::vector<std::size_t> pivots = m.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (std::size_t p : pivots) is_pivot[p] = true;
        std::vector<std::size_t> free_cols;
        for (std::size_t j = 0; j < cols_; ++j)
            if (!is_pivot[j]) free_cols.push_back(j);
        QMatrix ker(cols_, free_cols.size());
        for (std::size_t k = 0; k < free_cols.size(); ++k) {
            std::size_t f = free_cols[k];
            ker(f, k) = 1;
            for (std::size_t r = 0; r < pivots.size(); ++r) ker(pivots[r], k) = -m(r, f);
        }
        return ker;
    }

    // Solve this * X = B; nullopt if inconsistent. Free variables are zero.
    std::optional<QMatrix> solve(const QMatrix& b) const {
        if (b.rows() != rows_) throw std::invalid_argument("solve rhs row mismatch");
        QMatrix aug = hcat(b);
        std::vector<std::size_t> pivots = aug.rref();
        for (std::size_t p : pivots)
            if (p >= cols_) return std::nullopt;  // pivot in the rhs block
        QMatrix x(cols_, b.cols());
        for (std::size_t r = 0; r < pivots.size(); ++r)
            for (std::size_t j = 0; j < b.cols(); ++j) x(pivots[r], j) = aug(r, cols_ + j);
        return x;
    }

    // R with this * R = I, or nullopt if the rows are not independent.
    std::optional<QMatrix> right_inverse() const { return solve(identity(rows_)); }

    std::optional<QMatrix> inverse() const {
        if (rows_ != cols_) return std::nullopt;
        if (rank() != rows_) return std::nullopt;
        return right_inverse();
    }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

private:
    void check_same_shape(const QMatrix& o, const char* what) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string(what) + " shape " + shape_str() + " vs " +
                                        o.shape_str());
    }

    std::size_t rows_, cols_;
    std::vector<Rat> a_;
};

// Kronecker product, (i1*B.rows+i2, j1*B.cols+j2) = A(i1,j1) * B(i2,j2).
inline QMatrix kron(const QMatrix& A, const QMatrix& B) {
    QMatrix r(A.rows() * B.rows(), A.cols() * B.cols());
    for (std::size_t i1 = 0; i1 < A.rows(); ++i1)
        for (std::size_t j1 = 0; j1 < A.cols(); ++j1) {
            const Rat& a = A(i1, j1);
            if (a == 0) continue;
            for (std::size_t i2 = 0; i2 < B.rows(); ++i2)
                for (std::size_t j2 = 0; j2 < B.cols(); ++j2)
                    r(i1 * B.rows() + i2, j1 * B.cols() + j2) = a * B(i2, j2);
        }
    return r;
}

// Column-major vectorization, so vec(A X B) = kron(B^T, A) vec(X).
inline QMatrix vec(const QMatrix& A) {
    QMatrix r(A.rows() * A.cols(), 1);
    for (std::size_t j = 0; j < A.cols(); ++j)
        for (std::size_t i = 0; i < A.rows(); ++i) r(j * A.rows() + i, 0) = A(i, j);
    return r;
}

inline QMatrix unvec(const QMatrix& v, std::size_t rows, std::size_t cols) {
    if (v.rows() != rows * cols || v.cols() != 1)
        throw std::invalid_argument("unvec shape mismatch");
    QMatrix r(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) r(i, j) = v(j * rows + i, 0);
    return r;
}

}  // namespace secat
