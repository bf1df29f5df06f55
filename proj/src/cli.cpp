#include "smcf/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "smcf/errors.hpp"
#include "smcf/flow.hpp"
#include "smcf/metric.hpp"
#include "smcf/output.hpp"
#include "smcf/rng.hpp"

namespace smcf {

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

int termination_exit_code(Termination t) {
    switch (t) {
        case Termination::Converged: return 0;
        case Termination::MaxSteps: return 4;
        case Termination::SpacelikeLost: return 5;
        case Termination::NonFinite: return 6;
    }
    return 1;
}

}  // namespace

int cmd_check(const ProblemSpec& spec, std::ostream& out) {
    try {
        const Problem pb = build_problem(spec);
        const ConditionReport rep = check_condition(pb);
        out << condition_report_json(rep);
        return rep.satisfied ? 0 : 2;
    } catch (const NotSpacelike& e) {
        out << "{ \"psi_spacelike\": false, \"detail\": \"" << e.what() << "\" }\n";
        return 3;
    }
}

namespace {

// Data rejected before a grid state existed (e.g. sigma_max(A) >= 1): still
// leave a report naming the violation, plus header-only CSVs.
int write_rejected_outputs(const ProblemSpec& spec, const std::string& out_dir,
                           const NotSpacelike& e, std::ostream& out) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        out << "error: cannot create output directory '" << out_dir << "'\n";
        return 1;
    }
    {
        std::ofstream os(fs::path(out_dir) / "diagnostics.csv", std::ios::binary);
        os << kDiagnosticsHeader << "\n";
    }
    {
        std::ofstream os(fs::path(out_dir) / "report.json", std::ios::binary);
        os << "{\n  \"scenario\": \"" << spec.name
           << "\",\n  \"termination\": \"SpacelikeLost\",\n  \"detail\": \"" << e.what()
           << "\"\n}\n";
    }
    out << "termination: SpacelikeLost (" << e.what() << ")\n";
    return 5;
}

}  // namespace

int cmd_solve(const ProblemSpec& spec, const std::string& out_dir, int threads,
              std::ostream& out) {
    Problem pb;
    try {
        pb = build_problem(spec);
    } catch (const NotSpacelike& e) {
        return write_rejected_outputs(spec, out_dir, e, out);
    }

    bool psi_spacelike = true;
    ConditionReport cond;
    Monitor* monitor = nullptr;
    std::optional<Monitor> monitor_storage;
    try {
        monitor_storage.emplace(pb);
        monitor = &*monitor_storage;
        cond = monitor->condition_report(pb);
    } catch (const NotSpacelike&) {
        psi_spacelike = false;
        monitor = nullptr;
    }

    const double t0 = now_seconds();
    const RunResult result = run(pb, flow_options(spec, threads), monitor);
    const double seconds = now_seconds() - t0;

    double oracle_error = 0.0;
    const bool have_error = pb.oracle.has_value() &&
                            result.termination == Termination::Converged;
    if (have_error) oracle_error = sup_error_vs(result.final_state.f, *pb.oracle);

    SolveReportInputs inputs;
    inputs.spec = &spec;
    inputs.condition = psi_spacelike ? &cond : nullptr;
    inputs.result = &result;
    inputs.seconds = seconds;
    inputs.oracle_sup_error = have_error ? &oracle_error : nullptr;

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        out << "error: cannot create output directory '" << out_dir << "': " << ec.message()
            << "\n";
        return 1;
    }
    auto write_file = [&](const std::string& name, auto&& writer) -> bool {
        std::ofstream os(fs::path(out_dir) / name, std::ios::binary);
        if (!os) return false;
        writer(os);
        return static_cast<bool>(os);
    };
    const bool ok =
        write_file("diagnostics.csv",
                   [&](std::ostream& os) { write_diagnostics_csv(os, result.diagnostics); }) &&
        write_file("solution.csv",
                   [&](std::ostream& os) { write_solution_csv(os, result.final_state.f); }) &&
        write_file("report.json",
                   [&](std::ostream& os) { os << solve_report_json(inputs); });
    if (!ok) {
        out << "error: failed to write outputs under '" << out_dir << "'\n";
        return 1;
    }

    out << "termination: " << to_string(result.termination) << "  steps: "
        << result.final_state.step << "  residual: "
        << format_double(result.final_state.residual_sup) << "\n";
    return termination_exit_code(result.termination);
}

int cmd_order(const ProblemSpec& spec, const std::vector<double>& h_list, int threads,
              std::ostream& out) {
    OrderFit fit;
    try {
        fit = convergence_order(spec, h_list, threads);
    } catch (const NonOracleScenario& e) {
        out << "error: " << e.what() << "\n";
        return 1;
    }

    for (std::size_t i = 0; i < fit.hs.size(); ++i) {
        out << "h = " << format_double(fit.hs[i]) << "  termination = "
            << to_string(static_cast<Termination>(fit.terminations[i])) << "  sup_error = "
            << format_double(fit.errors[i]) << "\n";
    }
    if (!fit.all_converged) {
        out << "order not fitted: not every run converged\n";
        return 7;
    }
    if (!fit.fitted) {
        out << "order fit skipped: errors at the floor (< 1e-11)\n";
        return 0;
    }
    out << "fitted order p = " << format_double(fit.order) << "\n";
    return (fit.order >= 1.7 && fit.order <= 2.3) ? 0 : 7;
}

namespace {

struct Suite {
    std::ostream& out;
    int failures = 0;

    void check(const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "ok   " : "FAIL ") << name << " (" << detail << ")\n";
        if (!ok) ++failures;
    }
};

}  // namespace

int cmd_verify(std::ostream& out) {
    Suite suite{out};

    {  // stencil exactness on random quadratics
        const auto grid = std::make_shared<Grid>(
            build_grid(ConvexDomain::box({0.0, 0.0}, {1.0, 1.0}), 0.125));
        SplitMix64 rng(0x57e11ull);
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            double q[2][2], l[2], c0;
            q[0][0] = rng.uniform(-1, 1);
            q[1][1] = rng.uniform(-1, 1);
            q[0][1] = q[1][0] = rng.uniform(-0.2, 0.2);
            l[0] = rng.uniform(-0.2, 0.2);
            l[1] = rng.uniform(-0.2, 0.2);
            c0 = rng.uniform(-1, 1);
            GraphMap f(grid, 1);
            for (NodeId id = 0; id < grid->node_count(); ++id) {
                const auto p = grid->position(id);
                f.at(id)[0] = 0.5 * (q[0][0] * p[0] * p[0] + 2 * q[0][1] * p[0] * p[1] +
                                     q[1][1] * p[1] * p[1]) +
                              l[0] * p[0] + l[1] * p[1] + c0;
            }
            for (NodeId id : grid->interior_nodes()) {
                const auto p = grid->position(id);
                const Jacobian jac = gradient_at(f, id);
                worst = std::max(worst,
                                 std::abs(jac(0, 0) - (q[0][0] * p[0] + q[0][1] * p[1] + l[0])));
                const HessianStack hess = hessian_at(f, id);
                worst = std::max(worst, std::abs(hess[0](0, 0) - q[0][0]));
                worst = std::max(worst, std::abs(hess[0](0, 1) - q[0][1]));
            }
        }
        suite.check("stencil exact on quadratics", worst <= 1e-12,
                    "max deviation " + format_double(worst));
    }

    {  // catenoid pre-use verification
        const ExactSolution cat = lorentzian_catenoid(1.0);
        const Vec lo{1.0, -0.5}, hi{2.0, 0.5};
        const double res = verify_stationarity(cat, lo, hi, 10000, 0xcafeull);
        suite.check("catenoid stationarity (numeric differentiation)", res <= 1e-10,
                    "max |g^-1:D2f| = " + format_double(res));
        SplitMix64 rng(0xd1full);
        double div_res = 0.0;
        for (int k = 0; k < 200; ++k) {
            const Vec x{rng.uniform(1.0, 2.0), rng.uniform(-0.5, 0.5)};
            div_res = std::max(div_res, divergence_residual(cat, x));
        }
        suite.check("catenoid divergence form", div_res <= 1e-10,
                    "max |div| = " + format_double(div_res));
    }

    {  // holomorphic reduction g = (1 - |p'|^2) I
        const ExactSolution holo = holomorphic_solution({{0.0, 0.0}, {0.0, 0.0}, {0.15, 0.0}});
        SplitMix64 rng(0x401full);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const Vec x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
            const Jacobian jac = numeric_jacobian(holo.value, 2, 2, x);
            Mat s(2, 2);
            gram(jac, s);
            const double rho = 0.09 * (x[0] * x[0] + x[1] * x[1]);  // |0.3 z|^2
            worst = std::max({worst, std::abs(s(0, 0) - rho), std::abs(s(1, 1) - rho),
                              std::abs(s(0, 1))});
        }
        suite.check("holomorphic conformal reduction", worst <= 1e-9,
                    "max deviation " + format_double(worst));
        const double res =
            verify_stationarity(holo, Vec{-0.5, -0.5}, Vec{0.5, 0.5}, 2000, 0xf00dull);
        suite.check("holomorphic stationarity", res <= 1e-10,
                    "max residual " + format_double(res));
    }

    {  // brute-force tension equivalence
        double worst = 0.0;
        int fields = 0;
        for (int n = 2; n <= 3; ++n) {
            Vec lo(n, 0.0), hi(n, 1.0);
            const auto grid =
                std::make_shared<Grid>(build_grid(ConvexDomain::box(lo, hi), n == 2 ? 0.2 : 0.25));
            for (int m = 1; m <= 3; ++m) {
                for (int rep = 0; rep < 40; ++rep) {
                    const GraphMap f = random_spacelike_field(
                        grid, m, 0x9000ull + 100 * n + 10 * m + rep);
                    for (NodeId id : grid->interior_nodes()) {
                        const Vec a = tension(f, id);
                        const Vec b = brute_force_tension(f, id);
                        for (int c = 0; c < m; ++c)
                            worst = std::max(worst, std::abs(a[c] - b[c]));
                    }
                    ++fields;
                }
            }
        }
        suite.check("tension vs brute force", worst <= 1e-12,
                    std::to_string(fields) + " fields, max gap " + format_double(worst));
    }

    {  // theoretical-mode boundary bound equals the condition lhs
        SplitMix64 rng(0x11abull);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double eta = 1.0 + rng.uniform(0.0, 3.0);
            const double delta = rng.uniform(0.1, 5.0);
            const int n = 2 + static_cast<int>(rng.next() % 4);
            const double d2 = rng.uniform(0.0, 2.0);
            const double d1 = rng.uniform(0.0, 1.0);
            const double bound = boundary_gradient_bound(delta, xi_from_eta0(eta), n, d2, d1);
            const double lhs = 4.0 * n * eta * eta * delta * d2 + std::sqrt(2.0) * d1;
            worst = std::max(worst, std::abs(bound - lhs) / std::max(1.0, std::abs(lhs)));
        }
        suite.check("boundary bound vs condition lhs", worst <= 1e-13,
                    "max relative gap " + format_double(worst));
    }

    out << (suite.failures == 0 ? "verify: all suites passed\n"
                                : "verify: " + std::to_string(suite.failures) +
                                      " suite(s) FAILED\n");
    return suite.failures == 0 ? 0 : 1;
}

}  // namespace smcf
