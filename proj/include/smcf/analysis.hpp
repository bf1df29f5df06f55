#pragma once

#include <span>
#include <vector>

#include "smcf/flow_state.hpp"
#include "smcf/lattice.hpp"
#include "smcf/problem.hpp"
#include "smcf/psi.hpp"

namespace smcf {

/// Sup norms of the initial map, estimated on a sampling `factor` times
/// finer than the solver grid (boundary sup over snapped boundary samples).
struct PsiNorms {
    double sup_dpsi_boundary = 0.0;
    double sup_dpsi_domain = 0.0;
    double sup_d2psi = 0.0;        // directional sup, sampled
    double sup_d2psi_upper = 0.0;  // conservative bound sqrt(sum_b smax(H_b)^2)
};

/// The solvability condition, evaluated: lhs = 4 n eta0^2 delta sup|D2psi|
/// + sqrt(2) sup_boundary|Dpsi|, satisfied iff lhs < 1.  The condition is
/// sufficient, not necessary: `satisfied = false` does not predict solver
/// failure.
struct ConditionReport {
    int n = 0;
    int m = 0;
    double delta = 0.0;
    double sup_d2psi = 0.0;
    double sup_dpsi_boundary = 0.0;
    double eta0 = 1.0;
    double lhs = 0.0;
    bool satisfied = false;
    // documented extras: sampling estimates and the conservative bound
    double sup_dpsi_domain = 0.0;
    double sup_d2psi_upper = 0.0;
    int sampling_factor = 4;
};

/// Log-barrier parameters: k = 1/delta minimizes vk under the constraint
/// v k^2 / (1 + k delta)^2 >= n sup|D2psi| / (1 - xi), giving
/// vk = 4 n delta sup|D2psi| / (1 - xi).
struct BarrierParams {
    double k = 0.0;
    double v = 0.0;
    double vk = 0.0;
    Vec p;             // boundary point
    Hyperplane plane;  // supporting hyperplane at p
};

/// Monitored invariants at one recorded step.
struct DiagnosticsRecord {
    long step = 0;
    double t = 0.0;
    double dt = 0.0;
    double residual_sup = 0.0;
    double max_cosh_theta = 1.0;
    double sup_df = 0.0;
    double max_principle_margin = 0.0;
    double boundary_grad_margin = 0.0;
    double barrier_margin = 0.0;
    double product_bound_margin = 0.0;
};

/// sup|Dpsi| (largest singular value) and sup|D2psi| (directional sup of the
/// vector of second fundamental forms) over a refined sampling of the domain.
PsiNorms psi_norms(const PsiField& psi, const ConvexDomain& domain, double h_solver,
                   int sampling_factor = 4);

/// Max of cosh(theta) of the initial graph over the refined sampling.
/// Throws NotSpacelike (with the worst sample) when psi is not spacelike.
double eta0(const PsiField& psi, const ConvexDomain& domain, double h_solver,
            int sampling_factor = 4);

/// The theoretical uniform-parabolicity parameter: xi <= 1 - 1/eta0^2.
double xi_from_eta0(double eta0);

/// Right-hand side of the boundary gradient estimate:
/// 4 n delta / (1 - xi) * sup|D2psi| + sqrt(2) * sup_boundary|Dpsi|.
/// Pass a measured xi, or xi_from_eta0() for the theoretical mode (which
/// reproduces the solvability-condition coefficient exactly).
double boundary_gradient_bound(double delta, double xi, int n, double sup_d2psi,
                               double sup_dpsi_boundary);

BarrierParams barrier_params(const ConvexDomain& domain, double delta, double xi, int n,
                             double sup_d2psi, std::span<const double> p);

/// min over non-exterior nodes of v log(1 + k d_p) - sign (f^a - psi^a);
/// the theory predicts >= 0 with equality only at p.  psi is the run's
/// initial map (state.pinned).
double barrier_margin(const FlowState& state, const BarrierParams& params, int alpha, int sign);

ConditionReport check_condition(const Problem& problem, int sampling_factor = 4);

/// Boundary points probed by the barrier check: 8 per face (16 around a
/// ball).
std::vector<Vec> boundary_probe_points(const ConvexDomain& domain);

/// Precomputes everything `record` needs (delta, psi norms, eta0, probe
/// hyperplanes, initial sups); records are pure functions of a state
/// snapshot afterwards.
class Monitor {
public:
    explicit Monitor(const Problem& problem, int sampling_factor = 4);

    DiagnosticsRecord record(const FlowState& state, double dt, double xi_running) const;

    /// Same report as check_condition, assembled from this monitor's sampling.
    ConditionReport condition_report(const Problem& problem) const;

    double eta0() const { return eta0_; }
    double delta() const { return delta_; }
    const PsiNorms& norms() const { return norms_; }
    const std::vector<Vec>& probe_points() const { return probe_points_; }

private:
    ConvexDomain domain_;
    int n_ = 0;
    int m_ = 0;
    int sampling_factor_ = 4;
    double delta_ = 0.0;
    double eta0_ = 1.0;
    PsiNorms norms_;
    std::vector<Vec> probe_points_;
    Vec psi_component_sup_;  // per-component max of the initial data
};

}  // namespace smcf
