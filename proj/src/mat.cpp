#include "smcf/mat.hpp"

#include <algorithm>
#include <cmath>

#include "smcf/errors.hpp"

namespace smcf {

void gram(const Mat& a, Mat& out) {
    const int r = a.rows(), c = a.cols();
    assert(out.rows() == r && out.cols() == r);
    for (int i = 0; i < r; ++i) {
        for (int j = i; j < r; ++j) {
            double s = 0.0;
            for (int k = 0; k < c; ++k) s += a(i, k) * a(j, k);
            out(i, j) = s;
            out(j, i) = s;
        }
    }
}

static double off_diagonal_norm(const Mat& a) {
    const int n = a.rows();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

std::vector<double> jacobi_eigenvalues(Mat a, double off_tol, int max_sweeps) {
    std::vector<double> eig;
    jacobi_eigenvalues_inplace(a, eig, off_tol, max_sweeps);
    return eig;
}

void jacobi_eigenvalues_inplace(Mat& a, std::vector<double>& eig, double off_tol,
                                int max_sweeps) {
    const int n = a.rows();
    assert(a.cols() == n);
    eig.resize(n);
    if (n == 1) {
        eig[0] = a(0, 0);
        return;
    }

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= off_tol) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p), arq = a(r, q);
                    a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
                    a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
                }
            }
        }
    }

    for (int i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<double>());
}

static double invert2(const Mat& a, Mat& inv) {
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    if (det == 0.0) throw InvalidParameter("singular 2x2 matrix");
    const double d = 1.0 / det;
    inv(0, 0) = a(1, 1) * d;
    inv(0, 1) = -a(0, 1) * d;
    inv(1, 0) = -a(1, 0) * d;
    inv(1, 1) = a(0, 0) * d;
    return det;
}

static double invert3(const Mat& a, Mat& inv) {
    const double c00 = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    const double c01 = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
    const double c02 = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
    const double det = a(0, 0) * c00 + a(0, 1) * c01 + a(0, 2) * c02;
    if (det == 0.0) throw InvalidParameter("singular 3x3 matrix");
    const double d = 1.0 / det;
    inv(0, 0) = c00 * d;
    inv(1, 0) = c01 * d;
    inv(2, 0) = c02 * d;
    inv(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) * d;
    inv(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) * d;
    inv(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) * d;
    inv(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) * d;
    inv(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) * d;
    inv(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) * d;
    return det;
}

static double invert_pivot(Mat a, Mat& inv) {
    const int n = a.rows();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = (i == j) ? 1.0 : 0.0;

    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (a(piv, col) == 0.0) throw InvalidParameter("singular matrix");
        if (piv != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
            det = -det;
        }
        const double p = a(col, col);
        det *= p;
        const double pinv = 1.0 / p;
        for (int j = 0; j < n; ++j) {
            a(col, j) *= pinv;
            inv(col, j) *= pinv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return det;
}

double invert(const Mat& a, Mat& inv) {
    const int n = a.rows();
    assert(a.cols() == n && inv.rows() == n && inv.cols() == n);
    switch (n) {
        case 1: {
            if (a(0, 0) == 0.0) throw InvalidParameter("singular 1x1 matrix");
            inv(0, 0) = 1.0 / a(0, 0);
            return a(0, 0);
        }
        case 2:
            return invert2(a, inv);
        case 3:
            return invert3(a, inv);
        default:
            return invert_pivot(a, inv);
    }
}

}  // namespace smcf
