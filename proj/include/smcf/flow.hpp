#pragma once

#include <vector>

#include "smcf/analysis.hpp"
#include "smcf/flow_state.hpp"
#include "smcf/problem.hpp"

namespace smcf {

struct RunResult {
    FlowState final_state;
    Termination termination = Termination::MaxSteps;
    std::vector<DiagnosticsRecord> diagnostics;
    double initial_residual = 0.0;
    double xi_measured = 0.0;        // max over the run of sup_df^2
    double eta0_grid = 1.0;          // discrete max cosh(theta) at t = 0
    std::int64_t worst_node = -1;    // set on SpacelikeLost / NonFinite
    double worst_lambda = 0.0;
};

/// Flows the initial map until residual_sup <= max(tol_abs, tol_rel * r0),
/// the step limit, or a failure.  dt comes from cfl_dt each step; on a
/// first loss of spacelikeness the safety factor is halved once and the step
/// retried from the last snapshot, a second loss terminates the run.
/// Records diagnostics every options.diagnostics_every steps (and at
/// termination) when a monitor is supplied.  Deterministic for a fixed
/// problem regardless of worker count.
RunResult run(const Problem& problem, const FlowOptions& options, const Monitor* monitor = nullptr);

}  // namespace smcf
