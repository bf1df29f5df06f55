#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "smcf/problem.hpp"
#include "smcf/stencil.hpp"

namespace smcf {

enum class Termination { Converged, MaxSteps, SpacelikeLost, NonFinite };

const char* to_string(Termination t);

/// Snapshot of the evolving graph with per-node caches refreshed from f.
/// Caches are indexed by interior ordinal; reductions are computed by serial
/// scans so results do not depend on the worker count.
struct FlowState {
    double t = 0.0;
    long step = 0;
    GraphMap f;
    std::shared_ptr<const GraphMap> pinned;  // boundary data, re-applied every step

    // per interior node
    std::vector<double> velocity;     // interior_count * m, the tension field
    std::vector<double> lambda1;      // largest singular value of Df
    std::vector<double> lambda_prod;  // lambda1 * lambda2
    std::vector<double> cosh_theta;

    // order-independent reductions
    double sup_df = 0.0;
    double residual_sup = 0.0;
    double max_cosh = 1.0;
    double max_lambda_prod = 0.0;
    double boundary_df = 0.0;  // max lambda1 over interior nodes touching the boundary
    Vec max_f;                 // per-component max over all non-exterior nodes

    bool spacelike = true;
    bool finite = true;
    std::int64_t worst_node = -1;  // node id of the worst spacelike/NaN violation
    double worst_lambda = 0.0;

    explicit FlowState(GraphMap field) : f(std::move(field)) {}
};

/// Explicit-Euler stable step: dt = safety * h^2 * (1 - sup_df^2) / (2n).
/// With safety <= 0.9 the linearized bound dt <= h^2 / (2n * Lmax),
/// Lmax = 1/(1 - sup_df^2), holds.  Requires 0 < safety <= 1.
double cfl_dt(const FlowState& state, double safety);

/// Recomputes every cache of `state` from state.f.  The parallel version
/// maps over interior nodes with OpenMP; the serial version is the reference
/// implementation kept for tests and the benchmark.  Both produce
/// bit-identical results.
void refresh_state(FlowState& state, int threads = 0);
void refresh_state_serial(FlowState& state);

/// Samples the initial data and refreshes caches.
FlowState make_initial_state(const Problem& problem, int threads = 0);

/// Forward-Euler update from the frozen velocity field, boundary re-pinned,
/// caches refreshed.  Never throws: failures are flagged on the returned
/// state (spacelike / finite).
FlowState try_step(const FlowState& state, double dt, int threads = 0);

/// Same, but failures raise NotSpacelike / NonFiniteError.
FlowState step(const FlowState& state, double dt, int threads = 0);

}  // namespace smcf
