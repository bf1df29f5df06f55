#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "smcf/mat.hpp"
#include "smcf/stencil.hpp"

namespace smcf {

struct ProblemSpec;

/// Closed-form stationary graph used as ground truth: zero tension and
/// spacelike everywhere on its validity region.
struct ExactSolution {
    int n = 0;
    int m = 0;
    std::string id;
    std::function<Vec(std::span<const double>)> value;
    std::function<Jacobian(std::span<const double>)> jacobian;
    std::function<HessianStack(std::span<const double>)> hessian;
    std::function<bool(std::span<const double>)> valid;
    /// Extended-precision evaluator; the numeric-differentiation verifiers
    /// need it to push second-derivative roundoff below their tolerances.
    std::function<std::vector<long double>(std::span<const long double>)> value_ld;
};

/// f(x) = A x + b with A (m x n), sigma_max(A) < 1.
ExactSolution affine_solution(const Mat& a, const Vec& b);

/// Constant map; the graph is a slice (cosh theta = 1).
ExactSolution constant_solution(int n, const Vec& value);

/// f(x, y) = c * arcsinh(sqrt(x^2 + y^2) / c), the rotational exact graph of
/// the n=2, m=1 stationary equation.  Valid away from the axis r = 0 where
/// the graph turns lightlike.
ExactSolution lorentzian_catenoid(double c);

/// f = (Re p, Im p) for a complex polynomial p; harmonic components with a
/// conformal induced metric g = (1 - |p'|^2) I, hence stationary wherever
/// |p'| < 1.
ExactSolution holomorphic_solution(const std::vector<std::complex<double>>& coefficients);

const std::vector<std::string>& catalog_ids();

/// Independent recomputation of the flow velocity: naive loops, longhand
/// differences, cofactor inverse.  Shares no code with metric::tension.
Vec brute_force_tension(const GraphMap& f, NodeId node);

/// Random affine-plus-noise grid map kept comfortably spacelike; the input
/// of the oracle-equivalence sweeps.
GraphMap random_spacelike_field(std::shared_ptr<const Grid> grid, int m, std::uint64_t seed);

/// --- independent numeric differentiation (oracle pre-use verification) ---

/// 4th-order finite differences of a closed-form evaluator, accumulated in
/// long double.  Independent of the grid stencils.
Jacobian numeric_jacobian(const std::function<Vec(std::span<const double>)>& value, int n, int m,
                          std::span<const double> x, double step = 2e-3);
HessianStack numeric_hessian(const std::function<Vec(std::span<const double>)>& value, int n,
                             int m, std::span<const double> x, double step = 2e-3);

/// |g^{-1} : D^2 f| at x with every derivative taken numerically (in long
/// double when the solution provides value_ld); the pre-use stationarity
/// residual.
double stationarity_residual(const ExactSolution& sol, std::span<const double> x,
                             double step = 2e-3);

/// Max stationarity residual over `points` uniform random samples of the box
/// [lo, hi] (invalid samples skipped).  Deterministic for a fixed seed.
double verify_stationarity(const ExactSolution& sol, std::span<const double> lo,
                           std::span<const double> hi, int points, std::uint64_t seed);

/// div(Df / sqrt(1 - |Df|^2)) at x for m = 1 solutions, all derivatives
/// numeric; the divergence-form residual of the stationary equation.
double divergence_residual(const ExactSolution& sol, std::span<const double> x,
                           double step = 2e-3);

/// Result of a grid refinement study against an exact solution.
struct OrderFit {
    std::vector<double> hs;
    std::vector<double> errors;        // sup-error vs the exact solution at convergence
    std::vector<int> terminations;     // flow termination code per h
    bool all_converged = false;
    bool fitted = false;               // false when errors sit at the floor
    double order = 0.0;                // least-squares slope of log err vs log h
};

/// Runs the flow once per h and fits the convergence order.  The scenario
/// must reference a catalog solution.
OrderFit convergence_order(const ProblemSpec& spec, const std::vector<double>& h_list,
                           int threads = 0);

}  // namespace smcf
