#include "smcf/metric.hpp"

#include <algorithm>
#include <cmath>

#include "smcf/errors.hpp"

namespace smcf {

namespace {

void spectrum_from_gram(Mat& gram_jj, std::vector<double>& eig, Vec& lambda) {
    jacobi_eigenvalues_inplace(gram_jj, eig);
    lambda.resize(eig.size());
    for (std::size_t i = 0; i < eig.size(); ++i) lambda[i] = std::sqrt(std::max(eig[i], 0.0));
}

double cosh_from_lambda(const Vec& lambda) {
    double prod = 1.0;
    for (double l : lambda) prod *= 1.0 - l * l;
    return 1.0 / std::sqrt(prod);
}

}  // namespace

SingularSpectrum singular_values(const Jacobian& jac) {
    Mat s(jac.rows(), jac.rows());
    gram(jac, s);
    SingularSpectrum out;
    std::vector<double> eig;
    spectrum_from_gram(s, eig, out.lambda);
    return out;
}

InducedMetric induced_metric(const Jacobian& jac) {
    const int n = jac.rows();
    Mat s(n, n);
    gram(jac, s);

    Mat scratch = s;
    std::vector<double> eig;
    Vec lambda;
    spectrum_from_gram(scratch, eig, lambda);
    if (!(lambda[0] < 1.0 - kSpacelikeGuard)) throw NotSpacelike(lambda[0]);

    InducedMetric m;
    m.g.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.g(i, j) = (i == j ? 1.0 : 0.0) - s(i, j);
    m.g_inv.resize(n, n);
    m.det_g = invert(m.g, m.g_inv);
    if (n > 3) {
        // The elimination path does not preserve symmetry bit-for-bit.
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double v = 0.5 * (m.g_inv(i, j) + m.g_inv(j, i));
                m.g_inv(i, j) = v;
                m.g_inv(j, i) = v;
            }
    }
    return m;
}

HyperbolicAngle hyperbolic_angle(const SingularSpectrum& spectrum) {
    if (!(spectrum.max() < 1.0)) throw NotSpacelike(spectrum.max());
    return HyperbolicAngle{cosh_from_lambda(spectrum.lambda)};
}

bool evaluate_node(const GraphMap& f, NodeId node, MetricWorkspace& ws) {
    const int n = f.grid().dim();
    const int m = f.components();

    gradient_at(f, node, ws.jac);
    gram(ws.jac, ws.gram_jj);
    spectrum_from_gram(ws.gram_jj, ws.eig, ws.lambda);
    ws.lambda1 = ws.lambda[0];
    ws.lambda2 = n >= 2 ? ws.lambda[1] : 0.0;
    ws.spacelike = ws.lambda1 < 1.0 - kSpacelikeGuard;
    if (!ws.spacelike) return false;

    // gram_jj was destroyed by the eigensolve; rebuild g from J directly.
    gram(ws.jac, ws.g);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ws.g(i, j) = (i == j ? 1.0 : 0.0) - ws.g(i, j);
    ws.det_g = invert(ws.g, ws.g_inv);
    ws.cosh_theta = cosh_from_lambda(ws.lambda);

    hessian_at(f, node, ws.hess);
    for (int c = 0; c < m; ++c) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            s += ws.g_inv(i, i) * ws.hess[c](i, i);
            for (int j = i + 1; j < n; ++j) s += 2.0 * ws.g_inv(i, j) * ws.hess[c](i, j);
        }
        ws.tension_out[c] = s;
    }
    return true;
}

Vec tension(const GraphMap& f, NodeId node) {
    MetricWorkspace ws(f.grid().dim(), f.components());
    if (!evaluate_node(f, node, ws)) throw NotSpacelike(ws.lambda1, node);
    return ws.tension_out;
}

double laplace_beltrami_normality(const GraphMap& f, NodeId node) {
    const Grid& g = f.grid();
    const int n = g.dim();
    const int m = f.components();
    if (node >= g.node_count() || !g.is_interior(node))
        throw InsufficientStencil("normality diagnostic requires an interior node");
    const std::size_t ord = static_cast<std::size_t>(g.interior_ordinal(node));
    for (int i = 0; i < n; ++i) {
        const Grid::Arm& arm = g.arm(ord, i);
        if (!g.is_interior(arm.plus) || !g.is_interior(arm.minus))
            throw InsufficientStencil("normality diagnostic requires interior axis neighbours");
    }

    const double h = g.spacing();
    const int dim_f = n + m;  // F = (x, f)

    // W_i^A(y) = sqrt(G) g^ij d_j F^A evaluated at a neighbour node.
    auto flux = [&](NodeId y, int i, Vec& w) {
        const Jacobian jac = gradient_at(f, y);
        const InducedMetric met = induced_metric(jac);
        const double sq = std::sqrt(met.det_g);
        for (int a = 0; a < n; ++a) w[a] = sq * met.g_inv(i, a);
        for (int b = 0; b < m; ++b) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += met.g_inv(i, j) * jac(j, b);
            w[n + b] = sq * s;
        }
    };

    Vec laplace(dim_f, 0.0), wp(dim_f), wm(dim_f);
    for (int i = 0; i < n; ++i) {
        const Grid::Arm& arm = g.arm(ord, i);
        flux(arm.plus, i, wp);
        flux(arm.minus, i, wm);
        for (int a = 0; a < dim_f; ++a) laplace[a] += (wp[a] - wm[a]) / (2.0 * h);
    }
    const Jacobian jac0 = gradient_at(f, node);
    const InducedMetric met0 = induced_metric(jac0);
    const double inv_sq = 1.0 / std::sqrt(met0.det_g);
    for (auto& v : laplace) v *= inv_sq;

    // Pairing against the tangent frame d_iF = (e_i, d_i f) under
    // diag(+I_n, -I_m).
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double t = laplace[i];
        for (int b = 0; b < m; ++b) t -= jac0(i, b) * laplace[n + b];
        worst = std::max(worst, std::abs(t));
    }
    return worst;
}

}  // namespace smcf
