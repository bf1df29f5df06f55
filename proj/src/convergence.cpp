#include <cmath>

#include "smcf/errors.hpp"
#include "smcf/flow.hpp"
#include "smcf/oracles.hpp"
#include "smcf/scenario.hpp"

namespace smcf {

OrderFit convergence_order(const ProblemSpec& spec, const std::vector<double>& h_list,
                           int threads) {
    if (h_list.size() < 3)
        throw InvalidParameter("convergence study needs at least three spacings");
    for (std::size_t i = 1; i < h_list.size(); ++i)
        if (!(h_list[i] < h_list[i - 1]))
            throw InvalidParameter("spacings must decrease");

    OrderFit fit;
    fit.all_converged = true;
    for (double h : h_list) {
        ProblemSpec s = spec;
        s.h = h;
        const Problem pb = build_problem(s);
        if (!pb.oracle)
            throw NonOracleScenario("scenario '" + spec.name + "' has no exact solution");
        const RunResult rr = run(pb, flow_options(s, threads));
        fit.hs.push_back(h);
        fit.terminations.push_back(static_cast<int>(rr.termination));
        if (rr.termination != Termination::Converged) {
            fit.all_converged = false;
            fit.errors.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        fit.errors.push_back(sup_error_vs(rr.final_state.f, *pb.oracle));
    }

    if (!fit.all_converged) return fit;

    double emax = 0.0;
    for (double e : fit.errors) emax = std::max(emax, e);
    if (emax < 1e-11) return fit;  // at the floor, no meaningful slope

    double sx = 0.0, sy = 0.0;
    const double count = static_cast<double>(fit.hs.size());
    for (std::size_t i = 0; i < fit.hs.size(); ++i) {
        sx += std::log(fit.hs[i]);
        sy += std::log(fit.errors[i]);
    }
    const double mx = sx / count, my = sy / count;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < fit.hs.size(); ++i) {
        const double dx = std::log(fit.hs[i]) - mx;
        num += dx * (std::log(fit.errors[i]) - my);
        den += dx * dx;
    }
    fit.order = num / den;
    fit.fitted = true;
    return fit;
}

}  // namespace smcf
