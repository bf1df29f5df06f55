#pragma once

#include <array>
#include <string>
#include <vector>

#include "smcf/lattice.hpp"
#include "smcf/problem.hpp"
#include "smcf/psi.hpp"

namespace smcf {

struct DomainSpec {
    std::string kind;  // box | ball | polytope
    Vec box_min, box_max;
    Vec center;
    double radius = 0.0;
    std::vector<Vec> normals;
    Vec offsets;

    bool operator==(const DomainSpec&) const = default;
};

struct PolyTermSpec {
    std::vector<int> exponents;
    double coefficient = 0.0;
    bool operator==(const PolyTermSpec&) const = default;
};

struct PsiSpec {
    std::string kind;  // affine | polynomial | catalog
    // affine (also catalog id "affine")
    std::vector<Vec> matrix;  // m rows of n entries
    Vec offset;
    // polynomial
    std::vector<std::vector<PolyTermSpec>> components;
    // catalog
    std::string id;
    double catenoid_c = 1.0;
    std::vector<std::array<double, 2>> coefficients;  // complex polynomial, [re, im]
    Vec constant_value;

    bool operator==(const PsiSpec&) const = default;
};

struct PerturbationSpec {
    bool enabled = false;
    std::string type = "sine_bump";
    double amplitude = 0.0;
    bool operator==(const PerturbationSpec&) const = default;
};

struct TimeSpec {
    double safety = 0.9;
    long max_steps = 200000;
    double tol_abs = 1e-8;
    double tol_rel = 1e-6;
    bool operator==(const TimeSpec&) const = default;
};

struct OutputSpec {
    int diagnostics_every = 100;
    bool operator==(const OutputSpec&) const = default;
};

/// Parsed scenario: everything a solve needs except runtime knobs (worker
/// count, output paths).
struct ProblemSpec {
    std::string name;
    int n = 0;
    int m = 0;
    DomainSpec domain;
    PsiSpec psi;
    PerturbationSpec perturbation;
    double h = 0.0;
    TimeSpec time;
    OutputSpec outputs;

    bool operator==(const ProblemSpec&) const = default;
};

/// Strict parse of the scenario schema: unknown keys rejected with their
/// path, defaults applied for the time/outputs blocks.
ProblemSpec parse_scenario(const std::string& text);
ProblemSpec load_scenario(const std::string& path);

/// Canonical serialization; parse(emit(spec)) == spec.
std::string emit_scenario(const ProblemSpec& spec);

ConvexDomain make_domain(const DomainSpec& spec);

/// Assembles grid, analytic initial map (with perturbation), sampled initial
/// values, and the stationary oracle when psi comes from the catalog.
Problem build_problem(const ProblemSpec& spec);

FlowOptions flow_options(const ProblemSpec& spec, int threads = 0);

/// Max over non-exterior nodes of the Euclidean distance between f and the
/// exact solution at the node position.
double sup_error_vs(const GraphMap& f, const ExactSolution& sol);

}  // namespace smcf
