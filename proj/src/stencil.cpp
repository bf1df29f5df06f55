#include "smcf/stencil.hpp"

#include "smcf/errors.hpp"

namespace smcf {

namespace {

std::size_t interior_ordinal_checked(const GraphMap& f, NodeId node) {
    const Grid& g = f.grid();
    if (node >= g.node_count() || !g.is_interior(node))
        throw ExteriorNode("stencil evaluation requires an interior node");
    return static_cast<std::size_t>(g.interior_ordinal(node));
}

}  // namespace

void gradient_at(const GraphMap& f, NodeId node, Jacobian& jac) {
    const Grid& g = f.grid();
    const std::size_t ord = interior_ordinal_checked(f, node);
    const int n = g.dim();
    const int m = f.components();
    if (jac.rows() != n || jac.cols() != m) jac.resize(n, m);

    const double h = g.spacing();
    const auto f0 = f.at(node);

    if (g.uniform_stencil(ord)) {
        const double inv2h = 1.0 / (2.0 * h);
        for (int i = 0; i < n; ++i) {
            const Grid::Arm& arm = g.arm(ord, i);
            const auto fp = f.at(arm.plus);
            const auto fm = f.at(arm.minus);
            for (int b = 0; b < m; ++b) jac(i, b) = (fp[b] - fm[b]) * inv2h;
        }
        return;
    }
    for (int i = 0; i < n; ++i) {
        const Grid::Arm& arm = g.arm(ord, i);
        const auto fp = f.at(arm.plus);
        const auto fm = f.at(arm.minus);
        const double a = arm.ap, b = arm.am;
        const double w = 1.0 / (a * b * (a + b));
        for (int c = 0; c < m; ++c)
            jac(i, c) = (b * b * fp[c] - a * a * fm[c] + (a * a - b * b) * f0[c]) * w;
    }
}

Jacobian gradient_at(const GraphMap& f, NodeId node) {
    Jacobian jac(f.grid().dim(), f.components());
    gradient_at(f, node, jac);
    return jac;
}

void hessian_at(const GraphMap& f, NodeId node, HessianStack& hess) {
    const Grid& g = f.grid();
    const std::size_t ord = interior_ordinal_checked(f, node);
    const int n = g.dim();
    const int m = f.components();
    if (static_cast<int>(hess.size()) != m) hess.resize(m);
    for (auto& hmat : hess)
        if (hmat.rows() != n || hmat.cols() != n) hmat.resize(n, n);

    const double h = g.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const auto f0 = f.at(node);
    const bool uniform = g.uniform_stencil(ord);

    for (int i = 0; i < n; ++i) {
        const Grid::Arm& arm = g.arm(ord, i);
        const auto fp = f.at(arm.plus);
        const auto fm = f.at(arm.minus);
        if (uniform) {
            for (int c = 0; c < m; ++c)
                hess[c](i, i) = (fp[c] + fm[c] - 2.0 * f0[c]) * inv_h2;
        } else {
            const double a = arm.ap, b = arm.am;
            const double w = 2.0 / (a * b * (a + b));
            for (int c = 0; c < m; ++c)
                hess[c](i, i) = (fp[c] * b + fm[c] * a - f0[c] * (a + b)) * w;
        }
    }

    for (int i = 0; i < n - 1; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Grid::DiagArm& da = g.diag(ord, g.pair_index(i, j));
            const auto fpp = f.at(da.pp);
            const auto fpm = f.at(da.pm);
            const auto fmp = f.at(da.mp);
            const auto fmm = f.at(da.mm);
            if (uniform) {
                const double w = 0.25 * inv_h2;
                for (int c = 0; c < m; ++c) {
                    const double v = (fpp[c] - fpm[c] - fmp[c] + fmm[c]) * w;
                    hess[c](i, j) = v;
                    hess[c](j, i) = v;
                }
            } else {
                // Directional second derivatives along e_i + e_j and
                // e_i - e_j, each by the nonuniform 3-point formula; their
                // half-difference is the mixed derivative.
                const double w1 = 2.0 / (da.tpp * da.tmm * (da.tpp + da.tmm));
                const double w2 = 2.0 / (da.tpm * da.tmp * (da.tpm + da.tmp));
                for (int c = 0; c < m; ++c) {
                    const double d1 =
                        (fpp[c] * da.tmm + fmm[c] * da.tpp - f0[c] * (da.tpp + da.tmm)) * w1;
                    const double d2 =
                        (fpm[c] * da.tmp + fmp[c] * da.tpm - f0[c] * (da.tpm + da.tmp)) * w2;
                    const double v = 0.25 * (d1 - d2) * inv_h2;
                    hess[c](i, j) = v;
                    hess[c](j, i) = v;
                }
            }
        }
    }
}

HessianStack hessian_at(const GraphMap& f, NodeId node) {
    HessianStack hess;
    hessian_at(f, node, hess);
    return hess;
}

}  // namespace smcf
