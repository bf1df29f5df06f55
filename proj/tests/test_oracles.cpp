#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "smcf/errors.hpp"
#include "smcf/flow_state.hpp"
#include "smcf/metric.hpp"
#include "smcf/oracles.hpp"
#include "smcf/rng.hpp"
#include "smcf/scenario.hpp"

using namespace smcf;

namespace {

std::shared_ptr<const Grid> box_grid(Vec lo, Vec hi, double h) {
    return std::make_shared<Grid>(build_grid(ConvexDomain::box(std::move(lo), std::move(hi)), h));
}

GraphMap sample_solution(const ExactSolution& sol, std::shared_ptr<const Grid> grid) {
    GraphMap f(grid, sol.m);
    for (NodeId id = 0; id < grid->node_count(); ++id) {
        const Vec v = sol.value(grid->position(id));
        for (int c = 0; c < sol.m; ++c) f.at(id)[c] = v[c];
    }
    return f;
}

}  // namespace

TEST_CASE("affine solutions") {
    const ExactSolution slice = affine_solution(Mat(1, 2), {0.7});
    CHECK(hyperbolic_angle(singular_values(slice.jacobian(Vec{0.3, 0.4}))).cosh_theta == 1.0);

    Mat a(1, 2);
    a(0, 0) = 0.6;
    const ExactSolution tilted = affine_solution(a, {0.0});
    CHECK(hyperbolic_angle(singular_values(tilted.jacobian(Vec{0.0, 0.0}))).cosh_theta ==
          doctest::Approx(1.25).epsilon(1e-14));

    // sigma_max(A) = 0.9: discrete tension vanishes to rounding on any grid
    SplitMix64 rng(3);
    Mat b(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) b(i, j) = rng.uniform(-1.0, 1.0);
    Mat s(2, 2);
    gram(b, s);
    const double smax = std::sqrt(jacobi_eigenvalues(s)[0]);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) b(i, j) *= 0.9 / smax;
    const ExactSolution sol = affine_solution(b, {0.1, -0.2});
    const auto grid = box_grid({0.0, 0.0}, {1.0, 1.0}, 0.1);
    const GraphMap f = sample_solution(sol, grid);
    for (NodeId id : grid->interior_nodes()) {
        const Vec t = tension(f, id);
        CHECK(std::abs(t[0]) <= 1e-12);
        CHECK(std::abs(t[1]) <= 1e-12);
    }

    Mat steep(1, 2);
    steep(0, 0) = 1.2;
    CHECK_THROWS_AS(affine_solution(steep, {0.0}), NotSpacelike);
}

TEST_CASE("catenoid: closed-form values and pre-use verification") {
    const ExactSolution cat = lorentzian_catenoid(1.0);
    const Vec at10 = cat.value(Vec{1.0, 0.0});
    CHECK(at10[0] == doctest::Approx(0.881373587019543).epsilon(1e-14));
    const Jacobian jac = cat.jacobian(Vec{1.0, 0.0});
    CHECK(std::sqrt(jac(0, 0) * jac(0, 0) + jac(1, 0) * jac(1, 0)) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

    // analytic stationarity via independent numeric differentiation
    const double residual =
        verify_stationarity(cat, Vec{1.0, -0.5}, Vec{2.0, 0.5}, 10000, 0xabcdull);
    CHECK(residual <= 1e-10);

    SplitMix64 rng(5);
    double div_residual = 0.0;
    for (int k = 0; k < 300; ++k) {
        const Vec x{rng.uniform(1.0, 2.0), rng.uniform(-0.5, 0.5)};
        div_residual = std::max(div_residual, divergence_residual(cat, x));
    }
    CHECK(div_residual <= 1e-10);

    // analytic jacobian/hessian agree with numeric differentiation
    double jac_gap = 0.0, hess_gap = 0.0;
    for (int k = 0; k < 100; ++k) {
        const Vec x{rng.uniform(1.0, 2.0), rng.uniform(-0.5, 0.5)};
        const Jacobian ja = cat.jacobian(x);
        const Jacobian jn = numeric_jacobian(cat.value, 2, 1, x);
        const HessianStack ha = cat.hessian(x);
        const HessianStack hn = numeric_hessian(cat.value, 2, 1, x);
        for (int i = 0; i < 2; ++i) {
            jac_gap = std::max(jac_gap, std::abs(ja(i, 0) - jn(i, 0)));
            for (int j = 0; j < 2; ++j)
                hess_gap = std::max(hess_gap, std::abs(ha[0](i, j) - hn[0](i, j)));
        }
    }
    CHECK(jac_gap <= 1e-11);
    CHECK(hess_gap <= 1e-9);

    CHECK_THROWS_AS(lorentzian_catenoid(-1.0), InvalidParameter);
}

TEST_CASE("catenoid discrete tension refines at second order") {
    const ExactSolution cat = lorentzian_catenoid(1.0);
    double err[2];
    int k = 0;
    for (double h : {0.025, 0.0125}) {
        const auto grid = box_grid({1.0, -0.5}, {2.0, 0.5}, h);
        const GraphMap f = sample_solution(cat, grid);
        NodeId probe = 0;
        double bd = 1e300;
        for (NodeId id : grid->interior_nodes()) {
            const auto p = grid->position(id);
            const double d = (p[0] - 1.5) * (p[0] - 1.5) + p[1] * p[1];
            if (d < bd) {
                bd = d;
                probe = id;
            }
        }
        err[k++] = std::abs(tension(f, probe)[0]);
    }
    const double ratio = err[0] / err[1];
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("holomorphic solutions") {
    const ExactSolution holo = holomorphic_solution({{0.0, 0.0}, {0.0, 0.0}, {0.15, 0.0}});

    // |Df|(z) = 0.3 |z| stays below 0.3 sqrt(2)/2 on the square
    SplitMix64 rng(11);
    double sup = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const Vec x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        sup = std::max(sup, singular_values(holo.jacobian(x)).max());
    }
    CHECK(sup <= 0.3 * std::sqrt(0.5) + 1e-12);

    CHECK(verify_stationarity(holo, Vec{-0.5, -0.5}, Vec{0.5, 0.5}, 3000, 0x77ull) <= 1e-10);

    // mixed-derivative metric structure: rows of J are orthogonal with equal
    // norms (the conformal identity), to 1e-12 at random points
    for (int k = 0; k < 1000; ++k) {
        const Vec x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        const Jacobian jac = holo.jacobian(x);
        Mat s(2, 2);
        gram(jac, s);
        CHECK(std::abs(s(0, 1)) <= 1e-12);
        CHECK(std::abs(s(0, 0) - s(1, 1)) <= 1e-12);
        const double rho = 0.09 * (x[0] * x[0] + x[1] * x[1]);
        CHECK(std::abs(s(0, 0) - rho) <= 1e-12);
    }

    // p(z) = a z reduces to the affine solution
    const ExactSolution lin = holomorphic_solution({{0.0, 0.0}, {0.25, 0.1}});
    Mat a(2, 2);
    a(0, 0) = 0.25;
    a(0, 1) = -0.1;
    a(1, 0) = 0.1;
    a(1, 1) = 0.25;
    const ExactSolution aff = affine_solution(a, {0.0, 0.0});
    for (int k = 0; k < 50; ++k) {
        const Vec x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const Vec v1 = lin.value(x), v2 = aff.value(x);
        CHECK(std::abs(v1[0] - v2[0]) <= 1e-14);
        CHECK(std::abs(v1[1] - v2[1]) <= 1e-14);
        const Jacobian j1 = lin.jacobian(x), j2 = aff.jacobian(x);
        for (int i = 0; i < 2; ++i)
            for (int c = 0; c < 2; ++c) CHECK(std::abs(j1(i, c) - j2(i, c)) <= 1e-14);
    }
}

TEST_CASE("brute-force tension equals metric tension on random spacelike fields") {
    double worst = 0.0;
    for (int n = 2; n <= 3; ++n) {
        Vec lo(n, 0.0), hi(n, 1.0);
        const auto grid = box_grid(lo, hi, n == 2 ? 0.2 : 0.25);
        for (int m = 1; m <= 3; ++m) {
            for (int rep = 0; rep < 20; ++rep) {
                const GraphMap f =
                    random_spacelike_field(grid, m, 0xfeedull + 1000 * n + 100 * m + rep);
                for (NodeId id : grid->interior_nodes()) {
                    const Vec a = tension(f, id);
                    const Vec b = brute_force_tension(f, id);
                    for (int c = 0; c < m; ++c) worst = std::max(worst, std::abs(a[c] - b[c]));
                }
            }
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("brute-force tension spot values") {
    const auto grid = box_grid({-1.0, -1.0}, {1.0, 1.0}, 0.25);
    GraphMap aff(grid, 1);
    for (NodeId id = 0; id < grid->node_count(); ++id) {
        const auto p = grid->position(id);
        aff.at(id)[0] = 0.3 * p[0] - 0.1 * p[1];
    }
    for (NodeId id : grid->interior_nodes()) CHECK(std::abs(brute_force_tension(aff, id)[0]) <= 1e-13);

    GraphMap quad(grid, 1);
    for (NodeId id = 0; id < grid->node_count(); ++id) {
        const auto p = grid->position(id);
        quad.at(id)[0] = 0.1 * (p[0] * p[0] + p[1] * p[1]);
    }
    NodeId origin = 0;
    double bd = 1e300;
    for (NodeId id : grid->interior_nodes()) {
        const auto p = grid->position(id);
        const double d = p[0] * p[0] + p[1] * p[1];
        if (d < bd) {
            bd = d;
            origin = id;
        }
    }
    CHECK(brute_force_tension(quad, origin)[0] == doctest::Approx(0.4).epsilon(1e-13));
}

TEST_CASE("flowing an unperturbed exact solution stays put") {
    // covered at acceptance scale for 1e3 steps; here a quick smoke variant
    ProblemSpec spec = load_scenario(std::string(SMCF_SCENARIO_DIR) + "/catenoid.json");
    spec.h = 0.05;
    const Problem pb = build_problem(spec);
    FlowState st = make_initial_state(pb, 0);
    const GraphMap f0 = st.f;
    for (int k = 0; k < 100; ++k) st = step(st, cfl_dt(st, 0.9), 0);
    double drift = 0.0;
    for (std::size_t i = 0; i < f0.values().size(); ++i)
        drift = std::max(drift, std::abs(st.f.values()[i] - f0.values()[i]));
    CHECK(drift <= 10.0 * spec.h * spec.h);
}

TEST_CASE("convergence order: affine sits at the floor, non-oracle scenarios are rejected") {
    const ProblemSpec affine = load_scenario(std::string(SMCF_SCENARIO_DIR) + "/affine.json");
    const OrderFit fit = convergence_order(affine, {0.1, 0.05, 0.025}, 0);
    CHECK(fit.all_converged);
    CHECK_FALSE(fit.fitted);
    for (double e : fit.errors) CHECK(e <= 1e-12);

    const ProblemSpec quad = load_scenario(std::string(SMCF_SCENARIO_DIR) + "/quadratic.json");
    CHECK_THROWS_AS(convergence_order(quad, {0.1, 0.05, 0.025}, 0), NonOracleScenario);

    CHECK_THROWS_AS(convergence_order(affine, {0.1, 0.05}, 0), InvalidParameter);
}
