#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace smcf {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles.  All per-node matrices in this project
/// are tiny (n, m <= a handful), so a flat vector is plenty; hot loops reuse
/// preallocated instances instead of constructing new ones.
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    void resize(int rows, int cols) {
        rows_ = rows;
        cols_ = cols;
        a_.assign(static_cast<size_t>(rows) * cols, 0.0);
    }
    void set_zero() { a_.assign(a_.size(), 0.0); }

    bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    int rows_, cols_;
    std::vector<double> a_;
};

/// out = A * A^T (A is r x c, out is r x r symmetric).
void gram(const Mat& a, Mat& out);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, iterated
/// until the off-diagonal Frobenius norm drops below `off_tol`.  Returned in
/// non-increasing order.  The input is taken by value and destroyed.
std::vector<double> jacobi_eigenvalues(Mat a, double off_tol = 1e-13, int max_sweeps = 64);

/// Allocation-free variant for hot loops: destroys `a`, fills `eig` (resized
/// to a.rows()) in non-increasing order.
void jacobi_eigenvalues_inplace(Mat& a, std::vector<double>& eig, double off_tol = 1e-13,
                                int max_sweeps = 64);

/// Inverts `a` into `inv` and returns det(a).  Uses the adjugate for
/// n <= 3 and partial-pivot Gaussian elimination otherwise.  Throws
/// InvalidParameter on (numerically) singular input.
double invert(const Mat& a, Mat& inv);

inline double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace smcf
