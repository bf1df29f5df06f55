#pragma once

#include <memory>
#include <optional>
#include <string>

#include "smcf/lattice.hpp"
#include "smcf/oracles.hpp"
#include "smcf/psi.hpp"
#include "smcf/stencil.hpp"

namespace smcf {

/// Time-integration controls, defaulted per the scenario schema.
struct FlowOptions {
    double safety = 0.9;
    long max_steps = 200000;
    double tol_abs = 1e-8;
    double tol_rel = 1e-6;
    int diagnostics_every = 100;
    int threads = 0;  // 0 = all available workers
};

/// A fully assembled solve: grid, analytic initial map (perturbation
/// included), its grid samples, and the known stationary limit if any.
struct Problem {
    std::string name;
    std::shared_ptr<const Grid> grid;
    std::shared_ptr<const PsiField> initial_map;
    std::shared_ptr<const GraphMap> initial_values;
    std::optional<ExactSolution> oracle;

    int n() const { return grid->dim(); }
    int m() const { return initial_values->components(); }
};

}  // namespace smcf
