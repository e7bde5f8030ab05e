#include "flexkit/core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace flexkit {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

void check_all_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
        }
    }
}

}  // namespace

Point::Point(std::size_t n, double fill) : entries_(n, fill) {
    require(std::isfinite(fill), "Point: non-finite fill value");
}

Point::Point(std::vector<double> entries) : entries_(std::move(entries)) {
    check_all_finite(entries_, "Point");
}

Point::Point(std::initializer_list<double> entries) : entries_(entries) {
    check_all_finite(entries_, "Point");
}

void Point::check_finite() const { check_all_finite(entries_, "Point"); }

Point& Point::operator+=(const Point& other) {
    require(size() == other.size(), "Point: dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    check_finite();
    return *this;
}

Point& Point::operator-=(const Point& other) {
    require(size() == other.size(), "Point: dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    check_finite();
    return *this;
}

Point& Point::operator*=(double c) {
    for (double& x : entries_) x *= c;
    check_finite();
    return *this;
}

Point operator+(Point a, const Point& b) { return a += b; }
Point operator-(Point a, const Point& b) { return a -= b; }
Point operator*(double c, Point a) { return a *= c; }
Point operator-(Point a) { return a *= -1.0; }

double dot(const Point& a, const Point& b) {
    require(a.size() == b.size(), "dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_sq(const Point& a) { return dot(a, a); }
double norm(const Point& a) { return std::sqrt(norm_sq(a)); }

Point lincomb(double a, const Point& x, double b, const Point& y) {
    require(x.size() == y.size(), "lincomb: dimension mismatch");
    Point out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
    out.check_finite();
    return out;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {
    require(std::isfinite(fill), "DenseMatrix: non-finite fill value");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    require(entries_.size() == rows_ * cols_, "DenseMatrix: entry count != rows*cols");
    check_finite();
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double x : entries_) m = std::max(m, std::abs(x));
    return m;
}

void DenseMatrix::check_finite() const { check_all_finite(entries_, "DenseMatrix"); }

Point matvec(const DenseMatrix& M, const Point& v) {
    require(M.cols() == v.size(), "matvec: dimension mismatch");
    Point out(M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < M.cols(); ++j) s += M(i, j) * v[j];
        out[i] = s;
    }
    out.check_finite();
    return out;
}

Point matvec_transpose(const DenseMatrix& M, const Point& v) {
    require(M.rows() == v.size(), "matvec_transpose: dimension mismatch");
    Point out(M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) out[j] += M(i, j) * v[i];
    out.check_finite();
    return out;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
    require(A.cols() == B.rows(), "matmul: dimension mismatch");
    DenseMatrix out(A.rows(), B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t k = 0; k < A.cols(); ++k) {
            const double a = A(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < B.cols(); ++j) out(i, j) += a * B(k, j);
        }
    out.check_finite();
    return out;
}

DenseMatrix operator*(double c, DenseMatrix M) {
    DenseMatrix out(M.rows(), M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) out(i, j) = c * M(i, j);
    out.check_finite();
    return out;
}

DenseMatrix operator+(DenseMatrix A, const DenseMatrix& B) {
    require(A.rows() == B.rows() && A.cols() == B.cols(), "matrix add: dimension mismatch");
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) += B(i, j);
    A.check_finite();
    return A;
}

DenseMatrix block2x2(const DenseMatrix& A, const DenseMatrix& B,
                     const DenseMatrix& C, const DenseMatrix& D) {
    require(A.rows() == B.rows() && C.rows() == D.rows() &&
                A.cols() == C.cols() && B.cols() == D.cols(),
            "block2x2: incompatible block shapes");
    DenseMatrix out(A.rows() + C.rows(), A.cols() + B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) out(i, j) = A(i, j);
        for (std::size_t j = 0; j < B.cols(); ++j) out(i, A.cols() + j) = B(i, j);
    }
    for (std::size_t i = 0; i < C.rows(); ++i) {
        for (std::size_t j = 0; j < C.cols(); ++j) out(A.rows() + i, j) = C(i, j);
        for (std::size_t j = 0; j < D.cols(); ++j) out(A.rows() + i, A.cols() + j) = D(i, j);
    }
    return out;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices,
                           std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
    require(row_offsets_.size() == rows_ + 1, "SparseMatrix: bad offset count");
    require(col_indices_.size() == values_.size(), "SparseMatrix: index/value count mismatch");
    require(row_offsets_.front() == 0 && row_offsets_.back() == values_.size(),
            "SparseMatrix: offsets must span the value array");
    for (std::size_t r = 0; r < rows_; ++r) {
        require(row_offsets_[r] <= row_offsets_[r + 1], "SparseMatrix: decreasing offsets");
        for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
            require(col_indices_[k] < cols_, "SparseMatrix: column index out of range");
            if (k > row_offsets_[r]) {
                require(col_indices_[k - 1] < col_indices_[k],
                        "SparseMatrix: column indices not strictly increasing");
            }
        }
    }
    check_all_finite(values_, "SparseMatrix");
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix out(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
            out(r, col_indices_[k]) = values_[k];
    return out;
}

double SparseMatrix::max_abs() const {
    double m = 0.0;
    for (double x : values_) m = std::max(m, std::abs(x));
    return m;
}

Point matvec(const SparseMatrix& M, const Point& v) {
    require(M.cols() == v.size(), "matvec: dimension mismatch");
    Point out(M.rows());
    const auto& off = M.row_offsets();
    const auto& col = M.col_indices();
    const auto& val = M.values();
    for (std::size_t r = 0; r < M.rows(); ++r) {
        double s = 0.0;
        for (std::size_t k = off[r]; k < off[r + 1]; ++k) s += val[k] * v[col[k]];
        out[r] = s;
    }
    out.check_finite();
    return out;
}

Point matvec_transpose(const SparseMatrix& M, const Point& v) {
    require(M.rows() == v.size(), "matvec_transpose: dimension mismatch");
    Point out(M.cols());
    const auto& off = M.row_offsets();
    const auto& col = M.col_indices();
    const auto& val = M.values();
    for (std::size_t r = 0; r < M.rows(); ++r)
        for (std::size_t k = off[r]; k < off[r + 1]; ++k) out[col[k]] += val[k] * v[r];
    out.check_finite();
    return out;
}

Point solve_dense(const DenseMatrix& A, const Point& b) {
    require(A.rows() == A.cols(), "solve_dense: matrix not square");
    require(A.rows() == b.size(), "solve_dense: dimension mismatch");
    const std::size_t n = A.rows();
    std::vector<double> lu(A.entries());
    std::vector<double> x(b.entries());
    const double tiny = 1e-14 * std::max(1.0, A.max_abs());

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu[i * n + k]) > std::abs(lu[p * n + k])) p = i;
        if (std::abs(lu[p * n + k]) <= tiny) {
            throw std::runtime_error("solve_dense: numerically singular system");
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu[k * n + j], lu[p * n + j]);
            std::swap(x[k], x[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu[i * n + k] / lu[k * n + k];
            lu[i * n + k] = f;
            for (std::size_t j = k + 1; j < n; ++j) lu[i * n + j] -= f * lu[k * n + j];
            x[i] -= f * x[k];
        }
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= lu[ii * n + j] * x[j];
        x[ii] = s / lu[ii * n + ii];
    }
    return Point(std::move(x));
}

}  // namespace flexkit
