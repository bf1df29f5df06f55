// Times the per-step kernel: serial reference vs the OpenMP map, and checks
// they agree bit-for-bit while at it.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "smcf/flow_state.hpp"
#include "smcf/scenario.hpp"

using namespace smcf;

namespace {

using clock_type = std::chrono::steady_clock;

double time_refresh(FlowState& st, int threads, int reps, bool serial) {
    const auto t0 = clock_type::now();
    for (int k = 0; k < reps; ++k) {
        if (serial)
            refresh_state_serial(st);
        else
            refresh_state(st, threads);
    }
    return std::chrono::duration<double>(clock_type::now() - t0).count() / reps;
}

ProblemSpec bench_spec(double h) {
    ProblemSpec s;
    s.name = "bench-catenoid";
    s.n = 2;
    s.m = 1;
    s.domain.kind = "box";
    s.domain.box_min = {1.0, -0.5};
    s.domain.box_max = {2.0, 0.5};
    s.psi.kind = "catalog";
    s.psi.id = "catenoid";
    s.psi.catenoid_c = 1.0;
    s.perturbation.enabled = true;
    s.perturbation.amplitude = 0.05;
    s.h = h;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    double h = 1.0 / 160.0;
    int reps = 50;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--h") == 0 && i + 1 < argc) h = std::stod(argv[++i]);
        if (std::strcmp(argv[i], "--reps") == 0 && i + 1 < argc) reps = std::stoi(argv[++i]);
    }

    const Problem pb = build_problem(bench_spec(h));
    FlowState st = make_initial_state(pb, 1);
    std::printf("grid: h = %g, interior nodes = %zu\n", h, pb.grid->interior_count());

    FlowState serial_state = st;
    const double t_serial = time_refresh(serial_state, 1, reps, /*serial=*/true);
    std::printf("%-24s %10.3f ms/step\n", "serial reference", t_serial * 1e3);

#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
#else
    const int max_threads = 1;
#endif
    for (int threads = 1; threads <= max_threads; threads *= 2) {
        FlowState par_state = st;
        const double t_par = time_refresh(par_state, threads, reps, /*serial=*/false);
        const bool identical = par_state.velocity == serial_state.velocity &&
                               par_state.lambda1 == serial_state.lambda1 &&
                               par_state.cosh_theta == serial_state.cosh_theta;
        std::printf("%-21s %2d %10.3f ms/step  speedup %5.2fx  bitwise %s\n", "openmp, threads =",
                    threads, t_par * 1e3, t_serial / t_par, identical ? "equal" : "DIFFERENT");
        if (!identical) return 1;
    }
    return 0;
}
