#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace flexkit {

// Finite-dimensional point in R^n. Dimension is fixed at construction and all
// entries are required to be finite; mixed-dimension arithmetic throws.
class Point {
public:
    Point() = default;
    explicit Point(std::size_t n, double fill = 0.0);
    explicit Point(std::vector<double> entries);
    Point(std::initializer_list<double> entries);

    std::size_t size() const { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    double& operator[](std::size_t i) { return entries_[i]; }

    const std::vector<double>& entries() const { return entries_; }
    double* data() { return entries_.data(); }
    const double* data() const { return entries_.data(); }

    Point& operator+=(const Point& other);
    Point& operator-=(const Point& other);
    Point& operator*=(double c);

    // Re-checks finiteness after in-place mutation through data()/operator[].
    void check_finite() const;

private:
    std::vector<double> entries_;
};

Point operator+(Point a, const Point& b);
Point operator-(Point a, const Point& b);
Point operator*(double c, Point a);
Point operator-(Point a);

double dot(const Point& a, const Point& b);
double norm(const Point& a);
double norm_sq(const Point& a);
// a*x + b*y
Point lincomb(double a, const Point& x, double b, const Point& y);

// Dense row-major matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const std::vector<double>& entries() const { return entries_; }

    DenseMatrix transpose() const;
    double max_abs() const;
    void check_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

Point matvec(const DenseMatrix& M, const Point& v);
Point matvec_transpose(const DenseMatrix& M, const Point& v);
DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix operator*(double c, DenseMatrix M);
DenseMatrix operator+(DenseMatrix A, const DenseMatrix& B);

// [[A, B], [C, D]]
DenseMatrix block2x2(const DenseMatrix& A, const DenseMatrix& B,
                     const DenseMatrix& C, const DenseMatrix& D);

// Compressed-sparse-row matrix. Column indices must be strictly increasing
// within each row; offsets nondecreasing with the final offset equal to the
// number of stored values.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols,
                 std::vector<std::size_t> row_offsets,
                 std::vector<std::size_t> col_indices,
                 std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }
    const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
    const std::vector<std::size_t>& col_indices() const { return col_indices_; }
    const std::vector<double>& values() const { return values_; }

    DenseMatrix to_dense() const;
    double max_abs() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_offsets_;
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

Point matvec(const SparseMatrix& M, const Point& v);
Point matvec_transpose(const SparseMatrix& M, const Point& v);

// Solves A x = b by LU with partial pivoting. Throws std::runtime_error on a
// numerically singular system.
Point solve_dense(const DenseMatrix& A, const Point& b);

}  // namespace flexkit
