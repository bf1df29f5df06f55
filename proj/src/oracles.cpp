#include "smcf/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "smcf/errors.hpp"
#include "smcf/rng.hpp"

namespace smcf {

namespace {

double sigma_max(const Mat& a) {
    Mat s(a.rows(), a.rows());
    gram(a, s);
    const auto eig = jacobi_eigenvalues(s);
    return std::sqrt(std::max(eig[0], 0.0));
}

std::complex<double> poly_eval(const std::vector<std::complex<double>>& c,
                               std::complex<double> z) {
    std::complex<double> v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
    return v;
}

std::vector<std::complex<double>> poly_derivative(const std::vector<std::complex<double>>& c) {
    std::vector<std::complex<double>> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
    return d;
}

}  // namespace

ExactSolution affine_solution(const Mat& a, const Vec& b) {
    const int m = a.rows(), n = a.cols();
    if (static_cast<int>(b.size()) != m) throw InvalidParameter("offset size must match rows of A");
    const double smax = sigma_max(a);
    if (!(smax < 1.0)) throw NotSpacelike(smax);

    ExactSolution sol;
    sol.n = n;
    sol.m = m;
    sol.id = "affine";
    sol.value = [a, b, n, m](std::span<const double> x) {
        Vec v(m, 0.0);
        for (int c = 0; c < m; ++c) {
            double s = b[c];
            for (int i = 0; i < n; ++i) s += a(c, i) * x[i];
            v[c] = s;
        }
        return v;
    };
    sol.jacobian = [a, n, m](std::span<const double>) {
        Jacobian jac(n, m);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < m; ++c) jac(i, c) = a(c, i);
        return jac;
    };
    sol.hessian = [n, m](std::span<const double>) { return HessianStack(m, Mat(n, n)); };
    sol.valid = [](std::span<const double>) { return true; };
    return sol;
}

ExactSolution constant_solution(int n, const Vec& value) {
    Mat a(static_cast<int>(value.size()), n);
    ExactSolution sol = affine_solution(a, value);
    sol.id = "constant";
    return sol;
}

ExactSolution lorentzian_catenoid(double c) {
    if (!(c > 0.0)) throw InvalidParameter("catenoid parameter c must be positive");

    ExactSolution sol;
    sol.n = 2;
    sol.m = 1;
    sol.id = "catenoid";
    sol.value = [c](std::span<const double> x) {
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        return Vec{c * std::asinh(r / c)};
    };
    sol.jacobian = [c](std::span<const double> x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        const double r = std::sqrt(r2);
        const double fr = c / std::sqrt(c * c + r2);  // df/dr
        Jacobian jac(2, 1);
        jac(0, 0) = fr * x[0] / r;
        jac(1, 0) = fr * x[1] / r;
        return jac;
    };
    sol.hessian = [c](std::span<const double> x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        const double r = std::sqrt(r2);
        const double w = std::sqrt(c * c + r2);
        const double fr = c / w;
        const double frr = -c * r / (w * w * w);
        HessianStack hess(1, Mat(2, 2));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double rij = (i == j ? 1.0 : 0.0) / r - x[i] * x[j] / (r2 * r);
                hess[0](i, j) = frr * x[i] * x[j] / r2 + fr * rij;
            }
        return hess;
    };
    sol.valid = [](std::span<const double> x) {
        return std::sqrt(x[0] * x[0] + x[1] * x[1]) > 1e-8;
    };
    sol.value_ld = [c](std::span<const long double> x) {
        const long double cl = c;
        const long double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        return std::vector<long double>{cl * std::asinh(r / cl)};
    };
    return sol;
}

ExactSolution holomorphic_solution(const std::vector<std::complex<double>>& coefficients) {
    if (coefficients.empty()) throw InvalidParameter("empty polynomial");
    const auto dp = poly_derivative(coefficients);
    const auto dpp = poly_derivative(dp);

    ExactSolution sol;
    sol.n = 2;
    sol.m = 2;
    sol.id = "holomorphic_poly";
    sol.value = [coefficients](std::span<const double> x) {
        const auto v = poly_eval(coefficients, {x[0], x[1]});
        return Vec{v.real(), v.imag()};
    };
    sol.jacobian = [dp](std::span<const double> x) {
        // Cauchy-Riemann: u_x = v_y = Re p', v_x = -u_y = Im p'.
        const auto d = poly_eval(dp, {x[0], x[1]});
        Jacobian jac(2, 2);
        jac(0, 0) = d.real();
        jac(0, 1) = d.imag();
        jac(1, 0) = -d.imag();
        jac(1, 1) = d.real();
        return jac;
    };
    sol.hessian = [dpp](std::span<const double> x) {
        const auto d2 = poly_eval(dpp, {x[0], x[1]});
        HessianStack hess(2, Mat(2, 2));
        hess[0](0, 0) = d2.real();
        hess[0](0, 1) = hess[0](1, 0) = -d2.imag();
        hess[0](1, 1) = -d2.real();
        hess[1](0, 0) = d2.imag();
        hess[1](0, 1) = hess[1](1, 0) = d2.real();
        hess[1](1, 1) = -d2.imag();
        return hess;
    };
    sol.valid = [dp](std::span<const double> x) {
        return std::abs(poly_eval(dp, {x[0], x[1]})) < 1.0;
    };
    sol.value_ld = [coefficients](std::span<const long double> x) {
        std::complex<long double> v = 0.0L;
        const std::complex<long double> z{x[0], x[1]};
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
            v = v * z + std::complex<long double>(it->real(), it->imag());
        return std::vector<long double>{v.real(), v.imag()};
    };
    return sol;
}

const std::vector<std::string>& catalog_ids() {
    static const std::vector<std::string> ids = {"affine", "catenoid", "holomorphic_poly",
                                                 "constant"};
    return ids;
}

// ---------------------------------------------------------------------------
// brute-force tension: a deliberately separate code path
// ---------------------------------------------------------------------------

namespace {

double cofactor_det(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    if (n == 1) return a[0][0];
    double det = 0.0;
    double sign = 1.0;
    for (int col = 0; col < n; ++col) {
        std::vector<std::vector<double>> minor(n - 1, std::vector<double>(n - 1));
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int ccol = 0; ccol < n; ++ccol) {
                if (ccol == col) continue;
                minor[r - 1][cc++] = a[r][ccol];
            }
        }
        det += sign * a[0][col] * cofactor_det(minor);
        sign = -sign;
    }
    return det;
}

}  // namespace

Vec brute_force_tension(const GraphMap& f, NodeId node) {
    const Grid& g = f.grid();
    if (node >= g.node_count() || !g.is_interior(node))
        throw ExteriorNode("brute-force tension needs an interior node");
    const int n = g.dim();
    const int m = f.components();
    const double h = g.spacing();
    const std::size_t ord = static_cast<std::size_t>(g.interior_ordinal(node));

    // First derivatives, written out longhand.
    std::vector<std::vector<double>> dfdx(n, std::vector<double>(m, 0.0));
    for (int i = 0; i < n; ++i) {
        const Grid::Arm& arm = g.arm(ord, i);
        const double a = arm.ap, b = arm.am;
        for (int c = 0; c < m; ++c) {
            const double fp = f.at(arm.plus)[c];
            const double fm = f.at(arm.minus)[c];
            const double f0 = f.at(node)[c];
            dfdx[i][c] = (b * b * fp - a * a * fm + (a * a - b * b) * f0) / (a * b * (a + b));
        }
    }

    // Induced metric by triple loop.
    std::vector<std::vector<double>> gij(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = (i == j) ? 1.0 : 0.0;
            for (int c = 0; c < m; ++c) s -= dfdx[i][c] * dfdx[j][c];
            gij[i][j] = s;
        }

    // Spacelike check via Sylvester's criterion (no eigensolver here).
    for (int k = 1; k <= n; ++k) {
        std::vector<std::vector<double>> lead(k, std::vector<double>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) lead[i][j] = gij[i][j];
        if (!(cofactor_det(lead) > 0.0)) throw NotSpacelike(1.0, node);
    }

    // Inverse by adjugate / cofactor expansion.
    const double det = cofactor_det(gij);
    std::vector<std::vector<double>> ginv(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<std::vector<double>> minor(n - 1, std::vector<double>(n - 1));
            int rr = 0;
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                int cc = 0;
                for (int c = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor[rr][cc++] = gij[r][c];
                }
                ++rr;
            }
            const double cof = ((i + j) % 2 == 0 ? 1.0 : -1.0) *
                               (n == 1 ? 1.0 : cofactor_det(minor));
            ginv[j][i] = cof / det;
        }

    // Second derivatives, longhand.
    std::vector<std::vector<std::vector<double>>> d2(
        m, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
    for (int c = 0; c < m; ++c) {
        for (int i = 0; i < n; ++i) {
            const Grid::Arm& arm = g.arm(ord, i);
            const double a = arm.ap, b = arm.am;
            const double fp = f.at(arm.plus)[c];
            const double fm = f.at(arm.minus)[c];
            const double f0 = f.at(node)[c];
            d2[c][i][i] = 2.0 * (fp * b + fm * a - f0 * (a + b)) / (a * b * (a + b));
        }
        for (int i = 0; i < n - 1; ++i)
            for (int j = i + 1; j < n; ++j) {
                const Grid::DiagArm& da = g.diag(ord, g.pair_index(i, j));
                const double f0 = f.at(node)[c];
                const double fpp = f.at(da.pp)[c];
                const double fpm = f.at(da.pm)[c];
                const double fmp = f.at(da.mp)[c];
                const double fmm = f.at(da.mm)[c];
                const double d1 = 2.0 *
                                  (fpp * da.tmm + fmm * da.tpp - f0 * (da.tpp + da.tmm)) /
                                  (da.tpp * da.tmm * (da.tpp + da.tmm));
                const double dd2 = 2.0 *
                                   (fpm * da.tmp + fmp * da.tpm - f0 * (da.tpm + da.tmp)) /
                                   (da.tpm * da.tmp * (da.tpm + da.tmp));
                d2[c][i][j] = d2[c][j][i] = 0.25 * (d1 - dd2) / (h * h);
            }
    }

    Vec out(m, 0.0);
    for (int c = 0; c < m; ++c) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += ginv[i][j] * d2[c][i][j];
        out[c] = s;
    }
    return out;
}

GraphMap random_spacelike_field(std::shared_ptr<const Grid> grid, int m, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const int n = grid->dim();
    const double h = grid->spacing();
    const double scale = 0.5 / std::sqrt(static_cast<double>(n) * m);
    Mat a(m, n);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = rng.uniform(-scale, scale);

    GraphMap f(grid, m);
    const Grid& g = f.grid();
    for (NodeId id = 0; id < g.node_count(); ++id) {
        const auto pos = g.position(id);
        auto v = f.at(id);
        for (int c = 0; c < m; ++c) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += a(c, i) * pos[i];
            v[c] = s + 0.08 * h * rng.uniform(-1.0, 1.0);
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// numeric differentiation verifiers
// ---------------------------------------------------------------------------

namespace {

// 4th-order first-derivative weights on offsets {-2,-1,+1,+2}.
constexpr double kD1Off[4] = {-2.0, -1.0, 1.0, 2.0};
constexpr double kD1W[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};

Vec eval_shifted(const std::function<Vec(std::span<const double>)>& value,
                 std::span<const double> x, int axis_a, double da, int axis_b, double db) {
    Vec p(x.begin(), x.end());
    p[axis_a] += da;
    if (axis_b >= 0) p[axis_b] += db;
    return value(p);
}

}  // namespace

namespace {

using LVec = std::vector<long double>;
using LFn = std::function<LVec(std::span<const long double>)>;

// Wraps a solution as an extended-precision evaluator, falling back to the
// double evaluator when no value_ld is provided.
LFn lifted_value(const ExactSolution& sol) {
    if (sol.value_ld) return sol.value_ld;
    return [value = sol.value](std::span<const long double> x) {
        Vec xd(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) xd[k] = static_cast<double>(x[k]);
        const Vec v = value(xd);
        return LVec(v.begin(), v.end());
    };
}

LVec eval_shifted_ld(const LFn& value, std::span<const long double> x, int axis_a,
                     long double da, int axis_b, long double db) {
    LVec p(x.begin(), x.end());
    p[axis_a] += da;
    if (axis_b >= 0) p[axis_b] += db;
    return value(p);
}

LVec jacobian_ld(const LFn& value, int n, int m, std::span<const long double> x,
                 long double step) {
    LVec jac(static_cast<std::size_t>(n) * m, 0.0L);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < 4; ++k) {
            const LVec v = eval_shifted_ld(value, x, i, kD1Off[k] * step, -1, 0.0L);
            for (int c = 0; c < m; ++c)
                jac[static_cast<std::size_t>(i) * m + c] += static_cast<long double>(kD1W[k]) * v[c] / step;
        }
    }
    return jac;
}

LVec hessian_ld(const LFn& value, int n, int m, std::span<const long double> x,
                long double step) {
    LVec hess(static_cast<std::size_t>(m) * n * n, 0.0L);
    auto at = [&](int c, int i, int j) -> long double& {
        return hess[(static_cast<std::size_t>(c) * n + i) * n + j];
    };
    const LVec f0 = value(LVec(x.begin(), x.end()));
    for (int i = 0; i < n; ++i) {
        const LVec fp1 = eval_shifted_ld(value, x, i, step, -1, 0.0L);
        const LVec fm1 = eval_shifted_ld(value, x, i, -step, -1, 0.0L);
        const LVec fp2 = eval_shifted_ld(value, x, i, 2.0L * step, -1, 0.0L);
        const LVec fm2 = eval_shifted_ld(value, x, i, -2.0L * step, -1, 0.0L);
        for (int c = 0; c < m; ++c)
            at(c, i, i) = (-fp2[c] + 16.0L * fp1[c] - 30.0L * f0[c] + 16.0L * fm1[c] - fm2[c]) /
                          (12.0L * step * step);
    }
    for (int i = 0; i < n - 1; ++i)
        for (int j = i + 1; j < n; ++j) {
            LVec acc(m, 0.0L);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    const LVec v = eval_shifted_ld(value, x, i, kD1Off[a] * step, j,
                                                   kD1Off[b] * step);
                    const long double w =
                        static_cast<long double>(kD1W[a]) * static_cast<long double>(kD1W[b]);
                    for (int c = 0; c < m; ++c) acc[c] += w * v[c];
                }
            for (int c = 0; c < m; ++c) {
                at(c, i, j) = acc[c] / (step * step);
                at(c, j, i) = at(c, i, j);
            }
        }
    return hess;
}

}  // namespace

Jacobian numeric_jacobian(const std::function<Vec(std::span<const double>)>& value, int n, int m,
                          std::span<const double> x, double step) {
    Jacobian jac(n, m);
    for (int i = 0; i < n; ++i) {
        std::vector<long double> acc(m, 0.0L);
        for (int k = 0; k < 4; ++k) {
            const Vec v = eval_shifted(value, x, i, kD1Off[k] * step, -1, 0.0);
            for (int c = 0; c < m; ++c) acc[c] += static_cast<long double>(kD1W[k]) * v[c];
        }
        for (int c = 0; c < m; ++c) jac(i, c) = static_cast<double>(acc[c] / step);
    }
    return jac;
}

HessianStack numeric_hessian(const std::function<Vec(std::span<const double>)>& value, int n,
                             int m, std::span<const double> x, double step) {
    HessianStack hess(m, Mat(n, n));
    const Vec f0 = value(Vec(x.begin(), x.end()));
    for (int i = 0; i < n; ++i) {
        // 4th-order 5-point second derivative.
        const Vec fp1 = eval_shifted(value, x, i, step, -1, 0.0);
        const Vec fm1 = eval_shifted(value, x, i, -step, -1, 0.0);
        const Vec fp2 = eval_shifted(value, x, i, 2.0 * step, -1, 0.0);
        const Vec fm2 = eval_shifted(value, x, i, -2.0 * step, -1, 0.0);
        for (int c = 0; c < m; ++c) {
            const long double num = -static_cast<long double>(fp2[c]) + 16.0L * fp1[c] -
                                    30.0L * f0[c] + 16.0L * fm1[c] - fm2[c];
            hess[c](i, i) = static_cast<double>(num / (12.0L * step * step));
        }
    }
    for (int i = 0; i < n - 1; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<long double> acc(m, 0.0L);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    const Vec v = eval_shifted(value, x, i, kD1Off[a] * step, j, kD1Off[b] * step);
                    const long double w = static_cast<long double>(kD1W[a]) * kD1W[b];
                    for (int c = 0; c < m; ++c) acc[c] += w * v[c];
                }
            for (int c = 0; c < m; ++c) {
                const double v = static_cast<double>(acc[c] / (step * step));
                hess[c](i, j) = v;
                hess[c](j, i) = v;
            }
        }
    return hess;
}

double stationarity_residual(const ExactSolution& sol, std::span<const double> x, double step) {
    const LFn value = lifted_value(sol);
    const LVec xl(x.begin(), x.end());
    const LVec jl = jacobian_ld(value, sol.n, sol.m, xl, step);
    const LVec hl = hessian_ld(value, sol.n, sol.m, xl, step);

    Jacobian jac(sol.n, sol.m);
    for (int i = 0; i < sol.n; ++i)
        for (int c = 0; c < sol.m; ++c)
            jac(i, c) = static_cast<double>(jl[static_cast<std::size_t>(i) * sol.m + c]);
    Mat s(sol.n, sol.n), g(sol.n, sol.n), ginv(sol.n, sol.n);
    gram(jac, s);
    for (int i = 0; i < sol.n; ++i)
        for (int j = 0; j < sol.n; ++j) g(i, j) = (i == j ? 1.0 : 0.0) - s(i, j);
    invert(g, ginv);
    double norm = 0.0;
    for (int c = 0; c < sol.m; ++c) {
        double t = 0.0;
        for (int i = 0; i < sol.n; ++i)
            for (int j = 0; j < sol.n; ++j)
                t += ginv(i, j) *
                     static_cast<double>(hl[(static_cast<std::size_t>(c) * sol.n + i) * sol.n + j]);
        norm += t * t;
    }
    return std::sqrt(norm);
}

double verify_stationarity(const ExactSolution& sol, std::span<const double> lo,
                           std::span<const double> hi, int points, std::uint64_t seed) {
    SplitMix64 rng(seed);
    double worst = 0.0;
    Vec x(sol.n);
    for (int p = 0; p < points; ++p) {
        for (int k = 0; k < sol.n; ++k) x[k] = rng.uniform(lo[k], hi[k]);
        if (!sol.valid(x)) continue;
        worst = std::max(worst, stationarity_residual(sol, x));
    }
    return worst;
}

double divergence_residual(const ExactSolution& sol, std::span<const double> x, double step) {
    if (sol.m != 1) throw InvalidParameter("divergence residual is defined for m = 1");
    const int n = sol.n;
    const LFn value = lifted_value(sol);
    // v_i(y) = d_i f / sqrt(1 - |Df|^2) with Df computed numerically.
    auto flux = [&](std::span<const long double> y) {
        const LVec jac = jacobian_ld(value, n, 1, y, step);
        long double s = 0.0L;
        for (int i = 0; i < n; ++i) s += jac[i] * jac[i];
        LVec v(n);
        const long double w = 1.0L / std::sqrt(1.0L - s);
        for (int i = 0; i < n; ++i) v[i] = jac[i] * w;
        return v;
    };
    long double div = 0.0L;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < 4; ++k) {
            LVec y(x.begin(), x.end());
            y[i] += static_cast<long double>(kD1Off[k]) * step;
            div += static_cast<long double>(kD1W[k]) * flux(y)[i];
        }
    }
    return std::abs(static_cast<double>(div / step));
}

}  // namespace smcf
