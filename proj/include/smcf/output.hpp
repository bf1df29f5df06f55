#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "smcf/analysis.hpp"
#include "smcf/flow.hpp"
#include "smcf/scenario.hpp"

namespace smcf {

/// Shortest round-trip decimal representation; the only double formatter
/// used in output files, so reruns are byte-identical.
std::string format_double(double v);

inline constexpr const char* kDiagnosticsHeader =
    "step,t,dt,residual_sup,max_cosh_theta,sup_df,max_principle_margin,"
    "boundary_grad_margin,barrier_margin,product_bound_margin";

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records);

/// Rows in lexicographic multi-index order; snapped coordinates for boundary
/// nodes; class column I/B.
void write_solution_csv(std::ostream& os, const GraphMap& f);

std::string condition_report_json(const ConditionReport& rep);

struct SolveReportInputs {
    const ProblemSpec* spec = nullptr;
    const ConditionReport* condition = nullptr;  // null when psi is not spacelike
    const RunResult* result = nullptr;
    double seconds = 0.0;
    const double* oracle_sup_error = nullptr;
};
std::string solve_report_json(const SolveReportInputs& in);

}  // namespace smcf
