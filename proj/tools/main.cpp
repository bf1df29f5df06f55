#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smcf/cli.hpp"
#include "smcf/errors.hpp"
#include "smcf/scenario.hpp"

namespace {

std::vector<double> parse_h_list(const std::string& arg) {
    std::vector<double> hs;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        hs.push_back(std::stod(item));
    }
    return hs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirichlet solver for spacelike minimal surface systems via mean curvature flow"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::string h_arg;
    int threads = 0;

    CLI::App* check = app.add_subcommand("check", "evaluate the solvability condition");
    check->add_option("scenario", scenario_path, "scenario file")->required();

    CLI::App* solve = app.add_subcommand("solve", "flow the scenario to a stationary graph");
    solve->add_option("scenario", scenario_path, "scenario file")->required();
    solve->add_option("--out", out_dir, "output directory (default: out)");
    solve->add_option("--threads", threads, "worker count (0 = all)");

    CLI::App* order = app.add_subcommand("order", "grid refinement study vs the exact solution");
    order->set_help_flag("--help", "print help");  // frees -h/--h for the spacing list
    order->add_option("scenario", scenario_path, "scenario file")->required();
    order->add_option("--h", h_arg, "comma-separated decreasing spacings")->required();
    order->add_option("--threads", threads, "worker count (0 = all)");

    CLI::App* verify = app.add_subcommand("verify", "run the oracle and invariant suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return smcf::cmd_check(smcf::load_scenario(scenario_path), std::cout);
        if (solve->parsed())
            return smcf::cmd_solve(smcf::load_scenario(scenario_path), out_dir, threads,
                                   std::cout);
        if (order->parsed())
            return smcf::cmd_order(smcf::load_scenario(scenario_path), parse_h_list(h_arg),
                                   threads, std::cout);
        if (verify->parsed()) return smcf::cmd_verify(std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
