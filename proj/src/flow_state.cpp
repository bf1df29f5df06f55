#include "smcf/flow_state.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "smcf/errors.hpp"
#include "smcf/metric.hpp"

namespace smcf {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::Converged: return "Converged";
        case Termination::MaxSteps: return "MaxSteps";
        case Termination::SpacelikeLost: return "SpacelikeLost";
        case Termination::NonFinite: return "NonFinite";
    }
    return "?";
}

double cfl_dt(const FlowState& state, double safety) {
    if (!(safety > 0.0) || safety > 1.0)
        throw InvalidParameter("cfl safety factor must lie in (0, 1]");
    if (!state.spacelike) throw NotSpacelike(state.worst_lambda, state.worst_node);
    const Grid& g = state.f.grid();
    const double h = g.spacing();
    return safety * h * h * (1.0 - state.sup_df * state.sup_df) / (2.0 * g.dim());
}

namespace {

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

void size_caches(FlowState& st) {
    const std::size_t ni = st.f.grid().interior_count();
    const int m = st.f.components();
    st.velocity.assign(ni * m, 0.0);
    st.lambda1.assign(ni, 0.0);
    st.lambda_prod.assign(ni, 0.0);
    st.cosh_theta.assign(ni, 1.0);
    st.max_f.assign(m, 0.0);
}

// Per-node body shared by the serial reference and the OpenMP kernel.
inline void refresh_node(FlowState& st, std::size_t ord, MetricWorkspace& ws,
                         std::vector<std::uint8_t>& bad) {
    const Grid& g = st.f.grid();
    const int m = st.f.components();
    const NodeId id = g.interior_node(ord);
    if (evaluate_node(st.f, id, ws)) {
        bad[ord] = 0;
        st.lambda1[ord] = ws.lambda1;
        st.lambda_prod[ord] = ws.lambda1 * ws.lambda2;
        st.cosh_theta[ord] = ws.cosh_theta;
        for (int c = 0; c < m; ++c) st.velocity[ord * m + c] = ws.tension_out[c];
    } else {
        bad[ord] = 1;
        st.lambda1[ord] = ws.lambda1;
        st.lambda_prod[ord] = 0.0;
        st.cosh_theta[ord] = 0.0;
        for (int c = 0; c < m; ++c) st.velocity[ord * m + c] = 0.0;
    }
}

// Serial scans over the cache arrays; max-reductions only, so the outcome is
// independent of how the map above was scheduled.
void reduce_state(FlowState& st, const std::vector<std::uint8_t>& bad) {
    const Grid& g = st.f.grid();
    const std::size_t ni = g.interior_count();
    const int m = st.f.components();

    st.finite = true;
    st.worst_node = -1;
    for (std::size_t i = 0; i < st.f.values().size() && st.finite; ++i) {
        if (!std::isfinite(st.f.values()[i])) {
            st.finite = false;
            st.worst_node = static_cast<std::int64_t>(i / m);
        }
    }
    for (std::size_t i = 0; i < st.velocity.size() && st.finite; ++i) {
        if (!std::isfinite(st.velocity[i])) {
            st.finite = false;
            st.worst_node = g.interior_node(i / m);
        }
    }

    st.spacelike = true;
    st.worst_lambda = 0.0;
    for (std::size_t ord = 0; ord < ni; ++ord) {
        if (bad[ord] && st.lambda1[ord] > st.worst_lambda) {
            st.spacelike = false;
            st.worst_lambda = st.lambda1[ord];
            st.worst_node = g.interior_node(ord);
        }
    }

    st.sup_df = 0.0;
    st.max_cosh = 1.0;
    st.max_lambda_prod = 0.0;
    st.boundary_df = 0.0;
    st.residual_sup = 0.0;
    for (std::size_t ord = 0; ord < ni; ++ord) {
        st.sup_df = std::max(st.sup_df, st.lambda1[ord]);
        st.max_cosh = std::max(st.max_cosh, st.cosh_theta[ord]);
        st.max_lambda_prod = std::max(st.max_lambda_prod, st.lambda_prod[ord]);
        if (g.touches_boundary(ord)) st.boundary_df = std::max(st.boundary_df, st.lambda1[ord]);
        double r2 = 0.0;
        for (int c = 0; c < m; ++c) {
            const double v = st.velocity[ord * m + c];
            r2 += v * v;
        }
        st.residual_sup = std::max(st.residual_sup, std::sqrt(r2));
    }

    for (int c = 0; c < m; ++c) {
        double best = -std::numeric_limits<double>::infinity();
        for (NodeId id = 0; id < g.node_count(); ++id) best = std::max(best, st.f.at(id)[c]);
        st.max_f[c] = best;
    }
}

}  // namespace

void refresh_state_serial(FlowState& st) {
    const Grid& g = st.f.grid();
    size_caches(st);
    std::vector<std::uint8_t> bad(g.interior_count(), 0);
    MetricWorkspace ws(g.dim(), st.f.components());
    for (std::size_t ord = 0; ord < g.interior_count(); ++ord) refresh_node(st, ord, ws, bad);
    reduce_state(st, bad);
}

void refresh_state(FlowState& st, int threads) {
    const int nt = resolve_threads(threads);
    if (nt <= 1) {
        refresh_state_serial(st);
        return;
    }
    const Grid& g = st.f.grid();
    size_caches(st);
    std::vector<std::uint8_t> bad(g.interior_count(), 0);
    const std::int64_t ni = static_cast<std::int64_t>(g.interior_count());
#ifdef _OPENMP
#pragma omp parallel num_threads(nt)
    {
        MetricWorkspace ws(g.dim(), st.f.components());
#pragma omp for schedule(static)
        for (std::int64_t ord = 0; ord < ni; ++ord)
            refresh_node(st, static_cast<std::size_t>(ord), ws, bad);
    }
#else
    MetricWorkspace ws(g.dim(), st.f.components());
    for (std::int64_t ord = 0; ord < ni; ++ord)
        refresh_node(st, static_cast<std::size_t>(ord), ws, bad);
#endif
    reduce_state(st, bad);
}

FlowState make_initial_state(const Problem& problem, int threads) {
    FlowState st(*problem.initial_values);
    st.pinned = problem.initial_values;
    refresh_state(st, threads);
    return st;
}

FlowState try_step(const FlowState& state, double dt, int threads) {
    const Grid& g = state.f.grid();
    const int m = state.f.components();
    FlowState out(state.f);  // fresh buffer, frozen source
    out.pinned = state.pinned;
    out.t = state.t + dt;
    out.step = state.step + 1;

    const std::int64_t ni = static_cast<std::int64_t>(g.interior_count());
    const int nt = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#else
    (void)nt;
#endif
    for (std::int64_t ord = 0; ord < ni; ++ord) {
        const NodeId id = g.interior_node(static_cast<std::size_t>(ord));
        auto dst = out.f.at(id);
        const auto src = state.f.at(id);
        for (int c = 0; c < m; ++c) dst[c] = src[c] + dt * state.velocity[ord * m + c];
    }

    // Re-pin the Dirichlet data.
    if (out.pinned) {
        for (NodeId id = 0; id < g.node_count(); ++id) {
            if (g.node_class(id) == NodeClass::Boundary) {
                auto dst = out.f.at(id);
                const auto src = out.pinned->at(id);
                for (int c = 0; c < m; ++c) dst[c] = src[c];
            }
        }
    }

    refresh_state(out, threads);
    return out;
}

FlowState step(const FlowState& state, double dt, int threads) {
    if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
    if (!state.spacelike) throw NotSpacelike(state.worst_lambda, state.worst_node);
    FlowState out = try_step(state, dt, threads);
    if (!out.finite) throw NonFiniteError("non-finite value appeared during the step");
    if (!out.spacelike) throw NotSpacelike(out.worst_lambda, out.worst_node);
    return out;
}

}  // namespace smcf
