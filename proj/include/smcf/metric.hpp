#pragma once

#include <vector>

#include "smcf/mat.hpp"
#include "smcf/stencil.hpp"

namespace smcf {

/// Margin below 1 that the largest singular value must keep; beyond it the
/// node counts as having left the spacelike regime (NotSpacelike).
constexpr double kSpacelikeGuard = 1e-6;

/// Singular values of a Jacobian, non-increasing, zero-padded to n entries.
/// Spacelike <=> lambda[0] < 1.
struct SingularSpectrum {
    std::vector<double> lambda;
    double max() const { return lambda.empty() ? 0.0 : lambda[0]; }
};

/// Induced graph metric g = I - J J^T with its inverse and determinant.
struct InducedMetric {
    Mat g;
    Mat g_inv;
    double det_g = 1.0;
};

struct HyperbolicAngle {
    double cosh_theta = 1.0;
};

/// Singular values of J from the eigenvalues of J J^T (cyclic Jacobi,
/// off-diagonal norm <= 1e-13), negatives clamped to zero.
SingularSpectrum singular_values(const Jacobian& jac);

/// g = I - J J^T inverted directly (adjugate for n <= 3, partial-pivot
/// elimination otherwise).  Throws NotSpacelike when lambda1 >= 1 - guard.
InducedMetric induced_metric(const Jacobian& jac);

/// cosh(theta) = 1 / sqrt(prod(1 - lambda_i^2)).  Throws NotSpacelike.
HyperbolicAngle hyperbolic_angle(const SingularSpectrum& spectrum);

/// Flow velocity g^ij d2f/dxidxj at an interior node (one entry per target
/// component); the residual whose vanishing defines minimality.
Vec tension(const GraphMap& f, NodeId node);

/// Diagnostic for the normal-direction property of the graph Laplacian:
/// computes Delta_g F for F = (x, f(x)) in divergence form by nested
/// differences of the metric field and returns the largest pseudo-metric
/// pairing against the tangent vectors d_iF.  O(h^2)-small for smooth f.
/// Requires the node and its axis neighbours to be interior.
double laplace_beltrami_normality(const GraphMap& f, NodeId node);

/// Per-thread scratch for the fused node evaluation in the flow kernel.
struct MetricWorkspace {
    MetricWorkspace(int n, int m)
        : jac(n, m), gram_jj(n, n), g(n, n), g_inv(n, n), hess(m, Mat(n, n)), tension_out(m, 0.0) {}

    Mat jac;        // n x m
    Mat gram_jj;    // J J^T, destroyed by the eigensolve
    Mat g, g_inv;   // n x n
    HessianStack hess;
    std::vector<double> eig;
    Vec lambda;
    Vec tension_out;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double cosh_theta = 1.0;
    double det_g = 1.0;
    bool spacelike = false;
};

/// Fused gradient/spectrum/metric/Hessian/tension evaluation at an interior
/// node, writing every result into `ws`.  Returns false (with ws.lambda1
/// set) when the node is not spacelike; tension is then left undefined.
bool evaluate_node(const GraphMap& f, NodeId node, MetricWorkspace& ws);

}  // namespace smcf
