#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "smcf/cli.hpp"
#include "smcf/errors.hpp"
#include "smcf/output.hpp"
#include "smcf/scenario.hpp"

using namespace smcf;

namespace {

const char* kMinimalAffine = R"({
  "n": 2, "m": 1,
  "domain": { "kind": "box", "min": [0.0, 0.0], "max": [1.0, 1.0] },
  "psi": { "kind": "affine", "matrix": [[0.3, 0.0]], "offset": [0.0] },
  "grid": { "h": 0.05 }
})";

std::string scenario_path(const std::string& file) {
    return std::string(SMCF_SCENARIO_DIR) + "/" + file;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("minimal scenario parses with defaults filled") {
    const ProblemSpec s = parse_scenario(kMinimalAffine);
    CHECK(s.n == 2);
    CHECK(s.m == 1);
    CHECK(s.time.safety == 0.9);
    CHECK(s.time.max_steps == 200000);
    CHECK(s.time.tol_abs == 1e-8);
    CHECK(s.time.tol_rel == 1e-6);
    CHECK(s.outputs.diagnostics_every == 100);
    CHECK_FALSE(s.perturbation.enabled);
}

TEST_CASE("parse rejections") {
    CHECK_THROWS_AS(parse_scenario(R"({
      "n": 1, "m": 1,
      "domain": { "kind": "box", "min": [0.0], "max": [1.0] },
      "psi": { "kind": "affine", "matrix": [[0.3]], "offset": [0.0] },
      "grid": { "h": 0.05 }
    })"),
                    DimensionMismatch);

    try {
        parse_scenario(R"({
          "n": 2, "m": 1,
          "domain": { "kind": "box", "min": [0.0, 0.0], "max": [1.0, 1.0] },
          "psi": { "kind": "catalog", "id": "catenoidd", "params": { "c": 1.0 } },
          "grid": { "h": 0.05 }
        })");
        FAIL("expected UnknownCatalogId");
    } catch (const UnknownCatalogId& e) {
        const std::string msg = e.what();
        CHECK(msg.find("catenoid") != std::string::npos);
        CHECK(msg.find("holomorphic_poly") != std::string::npos);
    }

    try {
        parse_scenario(R"({
          "n": 2, "m": 1,
          "domain": { "kind": "box", "min": [0.0, 0.0], "max": [1.0, 1.0] },
          "psi": { "kind": "affine", "matrix": [[0.3, 0.0]], "offset": [0.0] },
          "grid": { "h": 0.05, "spacing": 0.1 }
        })");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.path() == "$.grid.spacing");
    }

    CHECK_THROWS_AS(parse_scenario("{ not json"), ParseError);
    CHECK_THROWS_AS(parse_scenario(R"({
      "n": 2, "m": 2,
      "domain": { "kind": "box", "min": [0.0, 0.0], "max": [1.0, 1.0] },
      "psi": { "kind": "affine", "matrix": [[0.3, 0.0]], "offset": [0.0, 0.0] },
      "grid": { "h": 0.05 }
    })"),
                    DimensionMismatch);
}

TEST_CASE("emit/parse round-trip on every catalog scenario") {
    for (const char* file : {"affine.json", "constant.json", "catenoid.json",
                             "catenoid_perturbed.json", "holomorphic.json",
                             "holomorphic_perturbed.json", "quadratic.json"}) {
        const ProblemSpec s = load_scenario(scenario_path(file));
        const ProblemSpec back = parse_scenario(emit_scenario(s));
        CHECK(back == s);
    }
}

TEST_CASE("cmd_check exit codes on the worked examples") {
    std::ostringstream out;
    CHECK(cmd_check(load_scenario(scenario_path("affine.json")), out) == 0);
    CHECK(out.str().find("\"lhs\"") != std::string::npos);

    std::ostringstream out2;
    CHECK(cmd_check(load_scenario(scenario_path("quadratic.json")), out2) == 2);

    ProblemSpec steep = load_scenario(scenario_path("affine.json"));
    steep.psi.matrix = {{1.2, 0.0}};
    std::ostringstream out3;
    CHECK(cmd_check(steep, out3) == 3);
    CHECK(out3.str().find("psi_spacelike") != std::string::npos);
}

TEST_CASE("cmd_solve writes byte-stable outputs and maps terminations to exit codes") {
    namespace fs = std::filesystem;
    const fs::path tmp = fs::temp_directory_path() / "smcf_test_solve";
    fs::remove_all(tmp);

    ProblemSpec spec = load_scenario(scenario_path("affine.json"));
    spec.h = 0.05;

    std::ostringstream log;
    const int code = cmd_solve(spec, (tmp / "a").string(), 1, log);
    CHECK(code == 0);
    const std::string diag = slurp(tmp / "a" / "diagnostics.csv");
    CHECK(diag.find(kDiagnosticsHeader) == 0);
    CHECK(diag.find('\n') != std::string::npos);
    // at least one data row, with a tiny residual in column 4
    {
        std::istringstream is(diag);
        std::string header, row;
        std::getline(is, header);
        REQUIRE(std::getline(is, row));
        std::istringstream cells(row);
        std::string cell;
        for (int k = 0; k < 4; ++k) std::getline(cells, cell, ',');
        CHECK(std::stod(cell) <= 1e-12);
    }

    const int code2 = cmd_solve(spec, (tmp / "b").string(), 0, log);
    CHECK(code2 == 0);
    CHECK(slurp(tmp / "a" / "diagnostics.csv") == slurp(tmp / "b" / "diagnostics.csv"));
    CHECK(slurp(tmp / "a" / "solution.csv") == slurp(tmp / "b" / "solution.csv"));

    // solution.csv: header plus one row per non-exterior node, first rows in
    // lexicographic multi-index order
    {
        const Problem pb = build_problem(spec);
        const std::string sol = slurp(tmp / "a" / "solution.csv");
        std::size_t rows = 0;
        for (char ch : sol)
            if (ch == '\n') ++rows;
        CHECK(rows == pb.grid->node_count() + 1);
        std::istringstream is(sol);
        std::string line;
        std::getline(is, line);
        CHECK(line == "x1,x2,f1,class");
    }

    // non-spacelike data: exit 5 and a report naming the worst node
    ProblemSpec steep = spec;
    steep.psi.kind = "polynomial";
    steep.psi.matrix.clear();
    steep.psi.offset.clear();
    steep.psi.components = {{{{1, 0}, 1.2}}};
    const int code5 = cmd_solve(steep, (tmp / "c").string(), 0, log);
    CHECK(code5 == 5);
    const std::string rep = slurp(tmp / "c" / "report.json");
    CHECK(rep.find("SpacelikeLost") != std::string::npos);
    CHECK(rep.find("worst_node") != std::string::npos);

    fs::remove_all(tmp);
}

TEST_CASE("cmd_order rejects non-oracle scenarios") {
    std::ostringstream out;
    const int code = cmd_order(load_scenario(scenario_path("quadratic.json")),
                               {0.1, 0.05, 0.025}, 0, out);
    CHECK(code == 1);
    CHECK(out.str().find("error") != std::string::npos);
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.0, 1.0, -1.5, 0.1, 1e-300, 3.141592653589793, 2.0 / 3.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}
