#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "smcf/scenario.hpp"

namespace smcf {

/// `check`: prints the condition report.  Exit 0 when satisfied, 2 when not,
/// 3 when psi is not spacelike.
int cmd_check(const ProblemSpec& spec, std::ostream& out);

/// `solve`: runs the flow and writes diagnostics.csv, solution.csv,
/// report.json under out_dir.  Exit 0 Converged, 4 MaxSteps,
/// 5 SpacelikeLost, 6 NonFinite, 1 on I/O failure.
int cmd_solve(const ProblemSpec& spec, const std::string& out_dir, int threads,
              std::ostream& out);

/// `order`: refinement study against the scenario's exact solution.  Exit 0
/// when the fitted order lands in [1.7, 2.3] (or every error sits at the
/// floor), 7 otherwise, 1 for scenarios without an oracle.
int cmd_order(const ProblemSpec& spec, const std::vector<double>& h_list, int threads,
              std::ostream& out);

/// `verify`: built-in oracle and invariant suites.  Exit 0 when all pass.
int cmd_verify(std::ostream& out);

}  // namespace smcf
