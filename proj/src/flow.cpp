#include "smcf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace smcf {

RunResult run(const Problem& problem, const FlowOptions& options, const Monitor* monitor) {
    FlowState st = make_initial_state(problem, options.threads);

    RunResult res{st};
    res.initial_residual = st.residual_sup;
    res.eta0_grid = st.max_cosh;
    res.xi_measured = st.sup_df * st.sup_df;

    long last_recorded = -1;
    double last_dt = 0.0;
    auto record = [&](const FlowState& s) {
        if (!monitor || s.step == last_recorded) return;
        res.diagnostics.push_back(monitor->record(s, last_dt, res.xi_measured));
        last_recorded = s.step;
    };

    if (!st.finite) {
        res.termination = Termination::NonFinite;
        res.worst_node = st.worst_node;
        res.final_state = std::move(st);
        return res;
    }
    if (!st.spacelike) {
        res.termination = Termination::SpacelikeLost;
        res.worst_node = st.worst_node;
        res.worst_lambda = st.worst_lambda;
        res.final_state = std::move(st);
        return res;
    }

    record(st);
    const double tol = std::max(options.tol_abs, options.tol_rel * res.initial_residual);
    double safety = options.safety;
    bool halved = false;

    while (true) {
        if (st.residual_sup <= tol) {
            res.termination = Termination::Converged;
            break;
        }
        if (st.step >= options.max_steps) {
            res.termination = Termination::MaxSteps;
            break;
        }

        const double dt = cfl_dt(st, safety);
        FlowState next = try_step(st, dt, options.threads);
        if (!next.finite) {
            res.termination = Termination::NonFinite;
            res.worst_node = next.worst_node;
            break;
        }
        if (!next.spacelike) {
            if (!halved) {
                // A too-aggressive step and genuinely bad data look alike;
                // one retry at half the step distinguishes them.
                halved = true;
                safety *= 0.5;
                continue;
            }
            res.termination = Termination::SpacelikeLost;
            res.worst_node = next.worst_node;
            res.worst_lambda = next.worst_lambda;
            break;
        }

        last_dt = dt;
        st = std::move(next);
        res.xi_measured = std::max(res.xi_measured, st.sup_df * st.sup_df);
        if (options.diagnostics_every > 0 && st.step % options.diagnostics_every == 0) record(st);
    }

    record(st);
    res.final_state = std::move(st);
    return res;
}

}  // namespace smcf
