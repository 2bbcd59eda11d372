#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "mopuc/scalar.hpp"

namespace mopuc {

// Dense row-major matrix. Everything here targets the small unstructured
// systems this library solves; no blocking, no fanciness.
template <ScalarField S>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, S{}) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    S& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const S& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = scalar_from_int<S>(1);
        return m;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const S& v = a.at(i, k);
                for (int j = 0; j < b.cols_; ++j) c.at(i, j) = c.at(i, j) + v * b.at(k, j);
            }
        return c;
    }

    bool operator==(const Matrix&) const = default;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<S> a_;
};

template <ScalarField S>
struct LuFactors {
    Matrix<S> lu;            // packed L (unit diagonal) and U
    std::vector<int> perm;   // row permutation
    S det{};                 // product of pivots with permutation sign
    bool singular = false;   // a zero pivot column was hit
};

// LU with partial pivoting. Pivots are selected by |entry| (double
// approximation); for the exact backend any nonzero pivot is equally valid,
// so magnitude selection is harmless and the arithmetic stays exact.
template <ScalarField S>
LuFactors<S> lu_factor(Matrix<S> a, const TolerancePolicy& pol) {
    const int n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("lu_factor: matrix not square");
    LuFactors<S> f;
    f.perm.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) f.perm[static_cast<size_t>(i)] = i;
    S det = scalar_from_int<S>(1);

    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = abs_approx(a.at(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = abs_approx(a.at(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(piv, j));
            std::swap(f.perm[static_cast<size_t>(k)], f.perm[static_cast<size_t>(piv)]);
            det = -det;
        }
        const S pivot = a.at(k, k);
        if (is_zero(pivot, pol)) {
            f.singular = true;
            f.det = S{};
            f.lu = std::move(a);
            return f;
        }
        det = det * pivot;
        for (int i = k + 1; i < n; ++i) {
            S m = a.at(i, k) / pivot;
            a.at(i, k) = m;
            for (int j = k + 1; j < n; ++j) a.at(i, j) = a.at(i, j) - m * a.at(k, j);
        }
    }
    f.det = std::move(det);
    f.lu = std::move(a);
    return f;
}

template <ScalarField S>
std::vector<S> lu_solve(const LuFactors<S>& f, const std::vector<S>& b) {
    const int n = f.lu.rows();
    if (f.singular) throw std::domain_error("lu_solve: singular matrix");
    std::vector<S> x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = b.at(static_cast<size_t>(f.perm[static_cast<size_t>(i)]));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            x[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] - f.lu.at(i, j) * x[static_cast<size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j)
            x[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] - f.lu.at(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] / f.lu.at(i, i);
    }
    return x;
}

// Solve A x = b; nullopt when A is singular under the backend zero test.
template <ScalarField S>
std::optional<std::vector<S>> solve(const Matrix<S>& a, const std::vector<S>& b, const TolerancePolicy& pol) {
    auto f = lu_factor(a, pol);
    if (f.singular) return std::nullopt;
    return lu_solve(f, b);
}

template <ScalarField S>
std::optional<Matrix<S>> inverse(const Matrix<S>& a, const TolerancePolicy& pol) {
    const int n = a.rows();
    auto f = lu_factor(a, pol);
    if (f.singular) return std::nullopt;
    Matrix<S> inv(n, n);
    std::vector<S> e(static_cast<size_t>(n), S{});
    for (int j = 0; j < n; ++j) {
        e[static_cast<size_t>(j)] = scalar_from_int<S>(1);
        auto col = lu_solve(f, e);
        for (int i = 0; i < n; ++i) inv.at(i, j) = col[static_cast<size_t>(i)];
        e[static_cast<size_t>(j)] = S{};
    }
    return inv;
}

// Fraction-free Bareiss elimination. Exact over any subring of the scalars
// (the interleaved divisions are exact); used by the exact backend as the
// determinant arbiter.
template <ScalarField S>
S bareiss_det(Matrix<S> a) {
    const int n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("bareiss_det: matrix not square");
    if (n == 0) return scalar_from_int<S>(1);
    S prev = scalar_from_int<S>(1);
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a.at(k, k) == S{}) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (!(a.at(i, k) == S{})) {
                    piv = i;
                    break;
                }
            if (piv < 0) return S{};  // whole column zero: det = 0
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
        prev = a.at(k, k);
    }
    S det = a.at(n - 1, n - 1);
    return sign < 0 ? -det : det;
}

inline double norm1_col_sum(const std::vector<double>& colsums) {
    double m = 0.0;
    for (double v : colsums) m = std::max(m, v);
    return m;
}

template <ScalarField S>
double norm1(const Matrix<S>& a) {
    std::vector<double> cols(static_cast<size_t>(a.cols()), 0.0);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) cols[static_cast<size_t>(j)] += abs_approx(a.at(i, j));
    return norm1_col_sum(cols);
}

// Reciprocal 1-norm condition number via the explicit inverse. The matrices
// here are tiny, so the O(n^3) inverse is the simplest reliable estimate.
template <ScalarField S>
double rcond_estimate(const Matrix<S>& a, const TolerancePolicy& pol) {
    if (a.rows() == 0) return 1.0;
    auto inv = inverse(a, pol);
    if (!inv) return 0.0;
    double na = norm1(a), ni = norm1(*inv);
    if (na == 0.0 || ni == 0.0) return 0.0;
    return 1.0 / (na * ni);
}

// |det| scaled by the product of row 2-norms (Hadamard bound), as a
// size-independent singularity gauge.
template <ScalarField S>
double hadamard_normalized_det(const Matrix<S>& a, double abs_det) {
    double scale = 1.0;
    for (int i = 0; i < a.rows(); ++i) {
        double row = 0.0;
        for (int j = 0; j < a.cols(); ++j) {
            double v = abs_approx(a.at(i, j));
            row += v * v;
        }
        row = std::sqrt(row);
        if (row == 0.0) return 0.0;
        scale *= row;
    }
    return abs_det / scale;
}

}  // namespace mopuc
