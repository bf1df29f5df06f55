#include "smcf/output.hpp"

#include <charconv>

#include <json.hpp>

namespace smcf {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records) {
    os << kDiagnosticsHeader << "\n";
    for (const auto& r : records) {
        os << r.step << ',' << format_double(r.t) << ',' << format_double(r.dt) << ','
           << format_double(r.residual_sup) << ',' << format_double(r.max_cosh_theta) << ','
           << format_double(r.sup_df) << ',' << format_double(r.max_principle_margin) << ','
           << format_double(r.boundary_grad_margin) << ',' << format_double(r.barrier_margin)
           << ',' << format_double(r.product_bound_margin) << "\n";
    }
}

void write_solution_csv(std::ostream& os, const GraphMap& f) {
    const Grid& g = f.grid();
    const int n = g.dim();
    const int m = f.components();
    for (int k = 0; k < n; ++k) os << "x" << (k + 1) << ',';
    for (int c = 0; c < m; ++c) os << "f" << (c + 1) << ',';
    os << "class\n";
    for (NodeId id = 0; id < g.node_count(); ++id) {
        const auto pos = g.position(id);
        for (int k = 0; k < n; ++k) os << format_double(pos[k]) << ',';
        const auto val = f.at(id);
        for (int c = 0; c < m; ++c) os << format_double(val[c]) << ',';
        os << (g.node_class(id) == NodeClass::Interior ? 'I' : 'B') << "\n";
    }
}

namespace {

json condition_json(const ConditionReport& rep) {
    json c;
    c["n"] = rep.n;
    c["m"] = rep.m;
    c["delta"] = rep.delta;
    c["sup_d2psi"] = rep.sup_d2psi;
    c["sup_dpsi_boundary"] = rep.sup_dpsi_boundary;
    c["eta0"] = rep.eta0;
    c["lhs"] = rep.lhs;
    c["satisfied"] = rep.satisfied;
    c["sup_dpsi_domain"] = rep.sup_dpsi_domain;
    c["sup_d2psi_upper"] = rep.sup_d2psi_upper;
    c["sampling_factor"] = rep.sampling_factor;
    c["note"] = "sufficient condition only: satisfied = false does not predict solver failure; "
                "norms are sampling estimates";
    return c;
}

}  // namespace

std::string condition_report_json(const ConditionReport& rep) {
    return condition_json(rep).dump(2) + "\n";
}

std::string solve_report_json(const SolveReportInputs& in) {
    json j;
    j["scenario"] = in.spec->name;
    j["n"] = in.spec->n;
    j["m"] = in.spec->m;
    j["h"] = in.spec->h;
    if (in.condition)
        j["condition"] = condition_json(*in.condition);
    else
        j["condition"] = nullptr;

    const RunResult& r = *in.result;
    j["termination"] = to_string(r.termination);
    j["steps"] = r.final_state.step;
    j["final_time"] = r.final_state.t;
    j["initial_residual"] = r.initial_residual;
    j["final_residual"] = r.final_state.residual_sup;
    j["eta0_grid"] = r.eta0_grid;
    j["xi_measured"] = r.xi_measured;
    j["max_cosh_theta"] = r.final_state.max_cosh;
    j["sup_df"] = r.final_state.sup_df;
    j["timing_seconds"] = in.seconds;
    if (in.oracle_sup_error) j["oracle_final_sup_error"] = *in.oracle_sup_error;
    if (r.termination == Termination::SpacelikeLost ||
        r.termination == Termination::NonFinite) {
        json w;
        w["node"] = r.worst_node;
        w["lambda1"] = r.worst_lambda;
        if (r.worst_node >= 0 &&
            r.worst_node < static_cast<std::int64_t>(r.final_state.f.grid().node_count())) {
            const auto pos = r.final_state.f.grid().position(
                static_cast<NodeId>(r.worst_node));
            w["position"] = Vec(pos.begin(), pos.end());
        }
        j["worst_node"] = w;
    }
    return j.dump(2) + "\n";
}

}  // namespace smcf
