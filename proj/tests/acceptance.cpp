// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line each.  Exit code = number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smcf/cli.hpp"
#include "smcf/flow.hpp"
#include "smcf/metric.hpp"
#include "smcf/oracles.hpp"
#include "smcf/output.hpp"
#include "smcf/rng.hpp"
#include "smcf/scenario.hpp"

using namespace smcf;

namespace {

using clock_type = std::chrono::steady_clock;

struct Tally {
    int failed = 0;

    void report(int id, const std::string& name, bool pass, const std::string& detail,
                double seconds) {
        std::printf("[%s] %2d  %-28s %s  (%.1f s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                    detail.c_str(), seconds);
        std::fflush(stdout);
        if (!pass) ++failed;
    }
};

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

ProblemSpec catalog(const std::string& file) {
    return load_scenario(std::string(SMCF_SCENARIO_DIR) + "/" + file);
}

std::string fmt(double v) { return format_double(v); }

struct CatalogRun {
    std::string name;
    Problem problem;
    std::optional<Monitor> monitor;
    FlowState initial;
    RunResult result;

    explicit CatalogRun(const std::string& file)
        : name(catalog(file).name),
          problem(build_problem(catalog(file))),
          monitor(std::in_place, problem),
          initial(make_initial_state(problem)),
          result(run(problem, flow_options(catalog(file)), &*monitor)) {}
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// max over interior nodes of |f(t) - f(0)| after a fixed number of steps
double drift_after_steps(const Problem& pb, int steps) {
    FlowState st = make_initial_state(pb);
    const GraphMap f0 = st.f;
    for (int k = 0; k < steps; ++k) st = step(st, cfl_dt(st, 0.9));
    double drift = 0.0;
    for (std::size_t i = 0; i < f0.values().size(); ++i)
        drift = std::max(drift, std::abs(st.f.values()[i] - f0.values()[i]));
    return drift;
}

}  // namespace

int main() {
    Tally tally;
    std::printf("acceptance suite (scenarios: %s)\n", SMCF_SCENARIO_DIR);

    // Oracle pre-use verification: every exact solution must pass its own
    // stationarity check (independent numeric differentiation) before any
    // criterion consumes it.
    {
        const auto t0 = clock_type::now();
        const ExactSolution cat = lorentzian_catenoid(1.0);
        const double rc = verify_stationarity(cat, Vec{1.0, -0.5}, Vec{2.0, 0.5}, 10000, 0x1ull);
        const ExactSolution holo =
            holomorphic_solution({{0.0, 0.0}, {0.0, 0.0}, {0.15, 0.0}});
        const double rh =
            verify_stationarity(holo, Vec{-0.5, -0.5}, Vec{0.5, 0.5}, 10000, 0x2ull);
        tally.report(0, "oracle pre-use verification", rc <= 1e-10 && rh <= 1e-10,
                     "catenoid " + fmt(rc) + ", holomorphic " + fmt(rh), seconds_since(t0));
    }

    // 1. tension vs brute force over 10^3 random spacelike fields
    {
        const auto t0 = clock_type::now();
        double worst = 0.0;
        int fields = 0;
        for (int n = 2; n <= 3; ++n) {
            Vec lo(n, 0.0), hi(n, 1.0);
            const auto grid = std::make_shared<Grid>(
                build_grid(ConvexDomain::box(lo, hi), n == 2 ? 0.2 : 0.25));
            for (int m = 1; m <= 3; ++m) {
                for (int rep = 0; rep < 167; ++rep) {
                    const GraphMap f = random_spacelike_field(
                        grid, m, 0xAC5Eull + 1000 * n + 100 * m + rep);
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
        const double secs = seconds_since(t0);
        tally.report(1, "oracle equivalence", worst <= 1e-12 && secs < 10.0,
                     std::to_string(fields) + " fields, max gap " + fmt(worst), secs);
    }

    // 2. stationarity of exact solutions
    {
        const auto t0 = clock_type::now();
        bool pass = true;
        std::string detail;

        {  // affine: residual stays at rounding for 100 steps
            const Problem pb = build_problem(catalog("affine.json"));
            FlowState st = make_initial_state(pb);
            double rmax = st.residual_sup;
            for (int k = 0; k < 100; ++k) {
                st = step(st, cfl_dt(st, 0.9));
                rmax = std::max(rmax, st.residual_sup);
            }
            pass = pass && rmax <= 1e-12;
            detail += "affine residual " + fmt(rmax);
        }
        for (const char* file : {"catenoid.json", "holomorphic.json"}) {
            const auto t1 = clock_type::now();
            const ProblemSpec spec = catalog(file);
            const Problem pb = build_problem(spec);
            const double drift = drift_after_steps(pb, 1000);
            const double bound = 10.0 * spec.h * spec.h;
            const double secs1 = seconds_since(t1);
            pass = pass && drift <= bound && secs1 < 60.0;
            detail += std::string(", ") + spec.name + " drift " + fmt(drift);
        }
        tally.report(2, "exact solutions stationary", pass, detail, seconds_since(t0));
    }

    // 3. convergence order on the two refinement scenarios
    {
        const auto t0 = clock_type::now();
        bool pass = true;
        std::string detail;
        for (const char* file : {"catenoid_perturbed.json", "holomorphic_perturbed.json"}) {
            const ProblemSpec spec = catalog(file);
            const OrderFit fit =
                convergence_order(spec, {1.0 / 20.0, 1.0 / 40.0, 1.0 / 80.0}, 0);
            const bool ok = fit.all_converged && fit.fitted && fit.order >= 1.7 &&
                            fit.order <= 2.3;
            pass = pass && ok;
            detail += std::string(file == std::string("catenoid_perturbed.json") ? "" : ", ") +
                      spec.name + " p = " + (fit.fitted ? fmt(fit.order) : "unfitted");
        }
        const double secs = seconds_since(t0);
        pass = pass && secs < 300.0;
        tally.report(3, "convergence order", pass, detail, secs);
    }

    // Monitored catalog runs shared by criteria 4-7 and 9.
    const auto t_runs = clock_type::now();
    std::vector<CatalogRun> runs;
    for (const char* file : {"affine.json", "catenoid.json", "catenoid_perturbed.json",
                             "holomorphic.json", "holomorphic_perturbed.json"})
        runs.emplace_back(file);
    std::printf("       (catalog runs for criteria 4-9: %.1f s)\n", seconds_since(t_runs));

    // 4. spacelikeness preservation
    {
        const auto t0 = clock_type::now();
        bool pass = true;
        double worst = 0.0;
        for (const auto& r : runs) {
            pass = pass && r.result.termination == Termination::Converged;
            for (const auto& rec : r.result.diagnostics) {
                worst = std::max(worst, rec.sup_df);
                pass = pass && rec.sup_df < 1.0;
            }
        }
        tally.report(4, "spacelikeness preserved", pass, "max sup|Df| " + fmt(worst),
                     seconds_since(t0));
    }

    // 5. maximum principle
    {
        const auto t0 = clock_type::now();
        bool pass = true;
        double worst = 1e300;
        for (const auto& r : runs)
            for (const auto& rec : r.result.diagnostics) {
                worst = std::min(worst, rec.max_principle_margin);
                pass = pass && rec.max_principle_margin >= -1e-8;
            }
        tally.report(5, "maximum principle", pass, "min margin " + fmt(worst),
                     seconds_since(t0));
    }

    // 6. angle bound and the node-wise chain
    {
        const auto t0 = clock_type::now();
        bool pass = true;
        double worst_ratio = 0.0;
        for (const auto& r : runs) {
            const double bound = r.monitor->eta0() * (1.0 + 1e-3);
            for (const auto& rec : r.result.diagnostics) {
                worst_ratio = std::max(worst_ratio, rec.max_cosh_theta / r.monitor->eta0());
                pass = pass && rec.max_cosh_theta <= bound;
            }
            for (const FlowState* st : {&r.initial, &r.result.final_state}) {
                for (std::size_t ord = 0; ord < st->lambda1.size(); ++ord) {
                    const double lhs = 1.0 - st->lambda1[ord] * st->lambda1[ord];
                    const double rhs =
                        1.0 / (st->cosh_theta[ord] * st->cosh_theta[ord]);
                    pass = pass && lhs >= rhs - 1e-10;
                }
            }
        }
        tally.report(6, "angle bound", pass,
                     "max cosh/eta0 = " + fmt(worst_ratio) + ", node chain ok",
                     seconds_since(t0));
    }

    // 7. boundary gradient estimate and barrier margins
    {
        const auto t0 = clock_type::now();
        bool pass = true;
        double min_grad = 1e300, min_barrier = 1e300;
        for (const auto& r : runs) {
            if (r.result.termination != Termination::Converged) continue;
            for (const auto& rec : r.result.diagnostics) {
                min_grad = std::min(min_grad, rec.boundary_grad_margin);
                min_barrier = std::min(min_barrier, rec.barrier_margin);
                pass = pass && rec.boundary_grad_margin > 0.0 &&
                       rec.barrier_margin >= -1e-8;
            }
        }
        tally.report(7, "boundary gradient estimate", pass,
                     "min grad margin " + fmt(min_grad) + ", min barrier " + fmt(min_barrier),
                     seconds_since(t0));
    }

    // 8. condition checker reproduces the worked reports
    {
        const auto t0 = clock_type::now();
        bool pass = true;
        std::string detail;

        ProblemSpec zero = catalog("affine.json");
        zero.psi.matrix = {{0.0, 0.0}};
        const ConditionReport rep0 = check_condition(build_problem(zero));
        pass = pass && rep0.lhs == 0.0 && rep0.satisfied;

        const ConditionReport rep1 = check_condition(build_problem(catalog("affine.json")));
        const double want1 = std::sqrt(2.0) * 0.3;
        pass = pass && std::abs(rep1.lhs - want1) <= 0.01 * want1 && rep1.satisfied;

        const ConditionReport rep2 = check_condition(build_problem(catalog("quadratic.json")));
        const double want2 = 8.0 / 0.68 * std::sqrt(2.0) * 0.4 + 0.8;
        pass = pass && std::abs(rep2.lhs - want2) <= 0.01 * want2 && !rep2.satisfied;
        detail = "lhs " + fmt(rep0.lhs) + " / " + fmt(rep1.lhs) + " / " + fmt(rep2.lhs);

        SplitMix64 rng(0x1dull);
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
        pass = pass && worst <= 1e-13;
        detail += ", identity gap " + fmt(worst);
        tally.report(8, "condition checker", pass, detail, seconds_since(t0));
    }

    // 9. singular-value product bound at convergence
    {
        const auto t0 = clock_type::now();
        bool pass = true;
        double worst = -1e300;
        for (const auto& r : runs) {
            const double bound = 1.0 - 1.0 / (r.monitor->eta0() * r.monitor->eta0()) + 1e-3;
            worst = std::max(worst, r.result.final_state.max_lambda_prod - bound);
            pass = pass && r.result.final_state.max_lambda_prod <= bound;
        }
        tally.report(9, "product bound at convergence", pass,
                     "max (lambda1*lambda2 - bound) = " + fmt(worst), seconds_since(t0));
    }

    // 10. determinism across worker counts
    {
        const auto t0 = clock_type::now();
        namespace fs = std::filesystem;
        const fs::path tmp = fs::temp_directory_path() / "smcf_acceptance_det";
        fs::remove_all(tmp);
        const ProblemSpec spec = catalog("catenoid_perturbed.json");
        std::ostringstream sink;
        const int c1 = cmd_solve(spec, (tmp / "one").string(), 1, sink);
        const int c2 = cmd_solve(spec, (tmp / "max").string(), 0, sink);
        const bool same_diag =
            slurp(tmp / "one" / "diagnostics.csv") == slurp(tmp / "max" / "diagnostics.csv");
        const bool same_sol =
            slurp(tmp / "one" / "solution.csv") == slurp(tmp / "max" / "solution.csv");
        fs::remove_all(tmp);
        tally.report(10, "determinism across workers", c1 == 0 && c2 == 0 && same_diag && same_sol,
                     std::string("diagnostics ") + (same_diag ? "identical" : "DIFFER") +
                         ", solution " + (same_sol ? "identical" : "DIFFER"),
                     seconds_since(t0));
    }

    std::printf("%d criteria failed\n", tally.failed);
    return tally.failed;
}
