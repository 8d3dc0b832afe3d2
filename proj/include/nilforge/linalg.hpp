#pragma once

#include <optional>
#include <vector>

#include "nilforge/quadext.hpp"

namespace nilforge {

/// Dense matrix over an exact scalar field. Row-major, deliberately simple:
/// every dimension in this project stays below a hundred.
template <ScalarField S>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = S(1L);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    S& at(int r, int c) { return a_[std::size_t(r) * cols_ + c]; }
    const S& at(int r, int c) const { return a_[std::size_t(r) * cols_ + c]; }

    std::vector<S> row(int r) const {
        return std::vector<S>(a_.begin() + std::size_t(r) * cols_,
                              a_.begin() + std::size_t(r + 1) * cols_);
    }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        Matrix out(x.rows_, y.cols_);
        for (int i = 0; i < x.rows_; ++i)
            for (int k = 0; k < x.cols_; ++k) {
                const S& v = x.at(i, k);
                if (v.is_zero()) continue;
                for (int j = 0; j < y.cols_; ++j) out.at(i, j) += v * y.at(k, j);
            }
        return out;
    }

    std::vector<S> apply(const std::vector<S>& v) const {
        std::vector<S> out(rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero()) out[i] += at(i, j) * v[j];
        return out;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<S> a_;
};

/// In-place reduced row echelon form with the fixed pivot rule (first column
/// with a nonzero entry, first such row). Returns the pivot columns.
template <ScalarField S>
std::vector<int> rref(Matrix<S>& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int pr = -1;
        for (int i = r; i < m.rows(); ++i)
            if (!m.at(i, c).is_zero()) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        if (pr != r)
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(r, j), m.at(pr, j));
        S inv = S(1L) / m.at(r, c);
        for (int j = c; j < m.cols(); ++j) m.at(r, j) = inv * m.at(r, j);
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            S f = m.at(i, c);
            for (int j = c; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <ScalarField S>
int rank(Matrix<S> m) {
    return static_cast<int>(rref(m).size());
}

/// Basis of the null space {x : A x = 0}, one vector per free column,
/// in column order (deterministic).
template <ScalarField S>
std::vector<std::vector<S>> kernel_basis(Matrix<S> m) {
    int n = m.cols();
    std::vector<int> pivots = rref(m);
    std::vector<bool> is_pivot(n, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<std::vector<S>> out;
    for (int c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        std::vector<S> v(n);
        v[c] = S(1L);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(int(r), c);
        out.push_back(std::move(v));
    }
    return out;
}

/// Particular solution of A x = b with free variables pinned to zero;
/// nullopt when inconsistent.
template <ScalarField S>
std::optional<std::vector<S>> solve(const Matrix<S>& a, const std::vector<S>& b) {
    Matrix<S> aug(a.rows(), a.cols() + 1);
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    std::vector<int> pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    std::vector<S> x(a.cols());
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(int(r), a.cols());
    return x;
}

template <ScalarField S>
std::optional<Matrix<S>> inverse(const Matrix<S>& a) {
    if (a.rows() != a.cols()) return std::nullopt;
    int n = a.rows();
    Matrix<S> aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, n + i) = S(1L);
    }
    std::vector<int> pivots = rref(aug);
    if (static_cast<int>(pivots.size()) < n || pivots[n - 1] != n - 1) return std::nullopt;
    Matrix<S> out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = aug.at(i, n + j);
    return out;
}

/// Reduces v against RREF rows with the given pivot columns; v is consumed.
template <ScalarField S>
std::vector<S> reduce_against(const Matrix<S>& rows, const std::vector<int>& pivots,
                              std::vector<S> v) {
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        const S& f = v[pivots[r]];
        if (f.is_zero()) continue;
        S factor = f;
        for (int j = 0; j < rows.cols(); ++j)
            if (!rows.at(int(r), j).is_zero()) v[j] -= factor * rows.at(int(r), j);
    }
    return v;
}

template <ScalarField S>
Matrix<S> from_rows(const std::vector<std::vector<S>>& rows, int cols) {
    Matrix<S> m(static_cast<int>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < cols; ++j) m.at(int(i), j) = rows[i][j];
    return m;
}

}  // namespace nilforge
