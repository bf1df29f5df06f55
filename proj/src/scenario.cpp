#include "smcf/scenario.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "smcf/errors.hpp"

namespace smcf {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ParseError(path, what);
}

const json& require(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) fail(path + "." + key, "missing required key");
    return j.at(key);
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> known) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (item.key() == k) ok = true;
        if (!ok) fail(path + "." + item.key(), "unknown key");
    }
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

long as_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Vec as_vector(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    Vec v;
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
}

DomainSpec parse_domain(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    DomainSpec d;
    d.kind = as_string(require(j, path, "kind"), path + ".kind");
    if (d.kind == "box") {
        reject_unknown(j, path, {"kind", "min", "max"});
        d.box_min = as_vector(require(j, path, "min"), path + ".min");
        d.box_max = as_vector(require(j, path, "max"), path + ".max");
    } else if (d.kind == "ball") {
        reject_unknown(j, path, {"kind", "center", "radius"});
        d.center = as_vector(require(j, path, "center"), path + ".center");
        d.radius = as_number(require(j, path, "radius"), path + ".radius");
    } else if (d.kind == "polytope") {
        reject_unknown(j, path, {"kind", "halfspaces"});
        const json& hs = require(j, path, "halfspaces");
        if (!hs.is_array()) fail(path + ".halfspaces", "expected an array");
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const std::string hp = path + ".halfspaces[" + std::to_string(i) + "]";
            if (!hs[i].is_object()) fail(hp, "expected an object");
            reject_unknown(hs[i], hp, {"normal", "offset"});
            d.normals.push_back(as_vector(require(hs[i], hp, "normal"), hp + ".normal"));
            d.offsets.push_back(as_number(require(hs[i], hp, "offset"), hp + ".offset"));
        }
    } else {
        fail(path + ".kind", "expected one of box | ball | polytope");
    }
    return d;
}

PsiSpec parse_psi(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    PsiSpec p;
    p.kind = as_string(require(j, path, "kind"), path + ".kind");
    if (p.kind == "affine") {
        reject_unknown(j, path, {"kind", "matrix", "offset"});
        const json& mat = require(j, path, "matrix");
        if (!mat.is_array()) fail(path + ".matrix", "expected an array of rows");
        for (std::size_t r = 0; r < mat.size(); ++r)
            p.matrix.push_back(as_vector(mat[r], path + ".matrix[" + std::to_string(r) + "]"));
        p.offset = as_vector(require(j, path, "offset"), path + ".offset");
    } else if (p.kind == "polynomial") {
        reject_unknown(j, path, {"kind", "components"});
        const json& comps = require(j, path, "components");
        if (!comps.is_array()) fail(path + ".components", "expected an array");
        for (std::size_t c = 0; c < comps.size(); ++c) {
            const std::string cp = path + ".components[" + std::to_string(c) + "]";
            if (!comps[c].is_array()) fail(cp, "expected an array of terms");
            std::vector<PolyTermSpec> terms;
            for (std::size_t t = 0; t < comps[c].size(); ++t) {
                const std::string tp = cp + "[" + std::to_string(t) + "]";
                if (!comps[c][t].is_object()) fail(tp, "expected an object");
                reject_unknown(comps[c][t], tp, {"exponents", "coefficient"});
                PolyTermSpec term;
                const json& ex = require(comps[c][t], tp, "exponents");
                if (!ex.is_array()) fail(tp + ".exponents", "expected an array");
                for (std::size_t e = 0; e < ex.size(); ++e)
                    term.exponents.push_back(static_cast<int>(
                        as_integer(ex[e], tp + ".exponents[" + std::to_string(e) + "]")));
                term.coefficient =
                    as_number(require(comps[c][t], tp, "coefficient"), tp + ".coefficient");
                terms.push_back(std::move(term));
            }
            p.components.push_back(std::move(terms));
        }
    } else if (p.kind == "catalog") {
        reject_unknown(j, path, {"kind", "id", "params"});
        p.id = as_string(require(j, path, "id"), path + ".id");
        bool known = false;
        for (const auto& id : catalog_ids())
            if (id == p.id) known = true;
        if (!known) {
            std::string ids;
            for (const auto& id : catalog_ids()) ids += (ids.empty() ? "" : ", ") + id;
            throw UnknownCatalogId("unknown catalog id '" + p.id + "' (valid: " + ids + ")");
        }
        const json& params = require(j, path, "params");
        const std::string pp = path + ".params";
        if (!params.is_object()) fail(pp, "expected an object");
        if (p.id == "catenoid") {
            reject_unknown(params, pp, {"c"});
            p.catenoid_c = as_number(require(params, pp, "c"), pp + ".c");
        } else if (p.id == "holomorphic_poly") {
            reject_unknown(params, pp, {"coefficients"});
            const json& co = require(params, pp, "coefficients");
            if (!co.is_array()) fail(pp + ".coefficients", "expected an array of [re, im]");
            for (std::size_t k = 0; k < co.size(); ++k) {
                const std::string kp = pp + ".coefficients[" + std::to_string(k) + "]";
                const Vec pair = as_vector(co[k], kp);
                if (pair.size() != 2) fail(kp, "expected [re, im]");
                p.coefficients.push_back({pair[0], pair[1]});
            }
        } else if (p.id == "constant") {
            reject_unknown(params, pp, {"value"});
            p.constant_value = as_vector(require(params, pp, "value"), pp + ".value");
        } else {  // affine
            reject_unknown(params, pp, {"matrix", "offset"});
            const json& mat = require(params, pp, "matrix");
            if (!mat.is_array()) fail(pp + ".matrix", "expected an array of rows");
            for (std::size_t r = 0; r < mat.size(); ++r)
                p.matrix.push_back(as_vector(mat[r], pp + ".matrix[" + std::to_string(r) + "]"));
            p.offset = as_vector(require(params, pp, "offset"), pp + ".offset");
        }
    } else {
        fail(path + ".kind", "expected one of affine | polynomial | catalog");
    }
    return p;
}

void check_dimensions(const ProblemSpec& s) {
    if (s.n < 2) throw DimensionMismatch("n must be at least 2");
    if (s.m < 1) throw DimensionMismatch("m must be at least 1");

    auto check_vec = [&](const Vec& v, int want, const char* what) {
        if (static_cast<int>(v.size()) != want)
            throw DimensionMismatch(std::string(what) + " has wrong dimension");
    };

    if (s.domain.kind == "box") {
        check_vec(s.domain.box_min, s.n, "domain.min");
        check_vec(s.domain.box_max, s.n, "domain.max");
    } else if (s.domain.kind == "ball") {
        check_vec(s.domain.center, s.n, "domain.center");
    } else {
        for (const auto& nrm : s.domain.normals) check_vec(nrm, s.n, "halfspace normal");
    }

    const PsiSpec& p = s.psi;
    if (p.kind == "affine" || (p.kind == "catalog" && p.id == "affine")) {
        if (static_cast<int>(p.matrix.size()) != s.m)
            throw DimensionMismatch("psi.matrix must have m rows");
        for (const auto& row : p.matrix) check_vec(row, s.n, "psi.matrix row");
        check_vec(p.offset, s.m, "psi.offset");
    } else if (p.kind == "polynomial") {
        if (static_cast<int>(p.components.size()) != s.m)
            throw DimensionMismatch("psi.components must have m entries");
        for (const auto& comp : p.components)
            for (const auto& term : comp)
                if (static_cast<int>(term.exponents.size()) != s.n)
                    throw DimensionMismatch("polynomial exponents must have n entries");
    } else if (p.kind == "catalog") {
        if (p.id == "catenoid" && (s.n != 2 || s.m != 1))
            throw DimensionMismatch("catenoid requires n = 2, m = 1");
        if (p.id == "holomorphic_poly" && (s.n != 2 || s.m != 2))
            throw DimensionMismatch("holomorphic_poly requires n = 2, m = 2");
        if (p.id == "constant") check_vec(p.constant_value, s.m, "psi.params.value");
    }
}

}  // namespace

ProblemSpec parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("$", e.what());
    }
    if (!j.is_object()) fail("$", "expected a top-level object");
    reject_unknown(j, "$",
                   {"name", "n", "m", "domain", "psi", "perturbation", "grid", "time", "outputs"});

    ProblemSpec s;
    if (j.contains("name")) s.name = as_string(j.at("name"), "$.name");
    s.n = static_cast<int>(as_integer(require(j, "$", "n"), "$.n"));
    s.m = static_cast<int>(as_integer(require(j, "$", "m"), "$.m"));
    s.domain = parse_domain(require(j, "$", "domain"), "$.domain");
    s.psi = parse_psi(require(j, "$", "psi"), "$.psi");

    if (j.contains("perturbation")) {
        const json& p = j.at("perturbation");
        if (!p.is_object()) fail("$.perturbation", "expected an object");
        reject_unknown(p, "$.perturbation", {"type", "amplitude"});
        s.perturbation.enabled = true;
        s.perturbation.type = as_string(require(p, "$.perturbation", "type"),
                                        "$.perturbation.type");
        if (s.perturbation.type != "sine_bump")
            fail("$.perturbation.type", "expected sine_bump");
        s.perturbation.amplitude = as_number(require(p, "$.perturbation", "amplitude"),
                                             "$.perturbation.amplitude");
        if (s.perturbation.amplitude < 0.0)
            fail("$.perturbation.amplitude", "amplitude must be nonnegative");
    }

    const json& grid = require(j, "$", "grid");
    if (!grid.is_object()) fail("$.grid", "expected an object");
    reject_unknown(grid, "$.grid", {"h"});
    s.h = as_number(require(grid, "$.grid", "h"), "$.grid.h");
    if (!(s.h > 0.0)) fail("$.grid.h", "h must be positive");

    if (j.contains("time")) {
        const json& t = j.at("time");
        if (!t.is_object()) fail("$.time", "expected an object");
        reject_unknown(t, "$.time", {"safety", "max_steps", "tol_abs", "tol_rel"});
        if (t.contains("safety")) s.time.safety = as_number(t.at("safety"), "$.time.safety");
        if (t.contains("max_steps"))
            s.time.max_steps = as_integer(t.at("max_steps"), "$.time.max_steps");
        if (t.contains("tol_abs")) s.time.tol_abs = as_number(t.at("tol_abs"), "$.time.tol_abs");
        if (t.contains("tol_rel")) s.time.tol_rel = as_number(t.at("tol_rel"), "$.time.tol_rel");
    }
    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        if (!o.is_object()) fail("$.outputs", "expected an object");
        reject_unknown(o, "$.outputs", {"diagnostics_every"});
        if (o.contains("diagnostics_every"))
            s.outputs.diagnostics_every = static_cast<int>(
                as_integer(o.at("diagnostics_every"), "$.outputs.diagnostics_every"));
    }

    check_dimensions(s);
    return s;
}

ProblemSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string emit_scenario(const ProblemSpec& s) {
    json j;
    if (!s.name.empty()) j["name"] = s.name;
    j["n"] = s.n;
    j["m"] = s.m;

    json dom;
    dom["kind"] = s.domain.kind;
    if (s.domain.kind == "box") {
        dom["min"] = s.domain.box_min;
        dom["max"] = s.domain.box_max;
    } else if (s.domain.kind == "ball") {
        dom["center"] = s.domain.center;
        dom["radius"] = s.domain.radius;
    } else {
        json hs = json::array();
        for (std::size_t i = 0; i < s.domain.normals.size(); ++i)
            hs.push_back({{"normal", s.domain.normals[i]}, {"offset", s.domain.offsets[i]}});
        dom["halfspaces"] = hs;
    }
    j["domain"] = dom;

    json psi;
    psi["kind"] = s.psi.kind;
    auto matrix_json = [&]() {
        json m = json::array();
        for (const auto& row : s.psi.matrix) m.push_back(row);
        return m;
    };
    if (s.psi.kind == "affine") {
        psi["matrix"] = matrix_json();
        psi["offset"] = s.psi.offset;
    } else if (s.psi.kind == "polynomial") {
        json comps = json::array();
        for (const auto& comp : s.psi.components) {
            json terms = json::array();
            for (const auto& t : comp)
                terms.push_back({{"exponents", t.exponents}, {"coefficient", t.coefficient}});
            comps.push_back(terms);
        }
        psi["components"] = comps;
    } else {
        psi["id"] = s.psi.id;
        json params;
        if (s.psi.id == "catenoid") {
            params["c"] = s.psi.catenoid_c;
        } else if (s.psi.id == "holomorphic_poly") {
            json co = json::array();
            for (const auto& pair : s.psi.coefficients) co.push_back({pair[0], pair[1]});
            params["coefficients"] = co;
        } else if (s.psi.id == "constant") {
            params["value"] = s.psi.constant_value;
        } else {
            params["matrix"] = matrix_json();
            params["offset"] = s.psi.offset;
        }
        psi["params"] = params;
    }
    j["psi"] = psi;

    if (s.perturbation.enabled)
        j["perturbation"] = {{"type", s.perturbation.type},
                             {"amplitude", s.perturbation.amplitude}};
    j["grid"] = {{"h", s.h}};
    j["time"] = {{"safety", s.time.safety},
                 {"max_steps", s.time.max_steps},
                 {"tol_abs", s.time.tol_abs},
                 {"tol_rel", s.time.tol_rel}};
    j["outputs"] = {{"diagnostics_every", s.outputs.diagnostics_every}};
    return j.dump(2) + "\n";
}

ConvexDomain make_domain(const DomainSpec& spec) {
    if (spec.kind == "box") return ConvexDomain::box(spec.box_min, spec.box_max);
    if (spec.kind == "ball") return ConvexDomain::ball(spec.center, spec.radius);
    std::vector<HalfSpace> faces;
    for (std::size_t i = 0; i < spec.normals.size(); ++i)
        faces.push_back({spec.normals[i], spec.offsets[i]});
    return ConvexDomain::polytope(std::move(faces));
}

namespace {

Mat matrix_from_rows(const std::vector<Vec>& rows) {
    Mat a(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) a(r, c) = rows[r][c];
    return a;
}

}  // namespace

Problem build_problem(const ProblemSpec& spec) {
    Problem pb;
    pb.name = spec.name;
    const ConvexDomain domain = make_domain(spec.domain);
    pb.grid = std::make_shared<Grid>(build_grid(domain, spec.h));

    std::shared_ptr<const PsiField> base;
    const PsiSpec& p = spec.psi;
    if (p.kind == "affine") {
        const ExactSolution sol = affine_solution(matrix_from_rows(p.matrix), p.offset);
        pb.oracle = sol;
        base = std::make_shared<ExactPsi>(sol);
    } else if (p.kind == "polynomial") {
        std::vector<std::vector<PolynomialPsi::Term>> comps;
        for (const auto& comp : p.components) {
            std::vector<PolynomialPsi::Term> terms;
            for (const auto& t : comp) terms.push_back({t.exponents, t.coefficient});
            comps.push_back(std::move(terms));
        }
        base = std::make_shared<PolynomialPsi>(spec.n, std::move(comps));
    } else {
        ExactSolution sol;
        if (p.id == "catenoid") {
            sol = lorentzian_catenoid(p.catenoid_c);
        } else if (p.id == "holomorphic_poly") {
            std::vector<std::complex<double>> coeffs;
            for (const auto& pair : p.coefficients) coeffs.emplace_back(pair[0], pair[1]);
            sol = holomorphic_solution(coeffs);
        } else if (p.id == "constant") {
            sol = constant_solution(spec.n, p.constant_value);
        } else {
            sol = affine_solution(matrix_from_rows(p.matrix), p.offset);
        }
        for (NodeId id = 0; id < pb.grid->node_count(); ++id) {
            const auto pos = pb.grid->position(id);
            if (!sol.valid(pos))
                throw InvalidParameter("catalog solution '" + p.id +
                                       "' is not valid on the whole grid");
        }
        pb.oracle = sol;
        base = std::make_shared<ExactPsi>(std::move(sol));
    }

    if (spec.perturbation.enabled && spec.perturbation.amplitude != 0.0) {
        if (spec.domain.kind != "box")
            throw InvalidParameter("the sine-bump perturbation requires a box domain");
        base = std::make_shared<SineBumpPsi>(base, spec.domain.box_min, spec.domain.box_max,
                                             spec.perturbation.amplitude);
    }
    pb.initial_map = base;
    pb.initial_values = std::make_shared<GraphMap>(sample_map(*base, pb.grid));
    return pb;
}

FlowOptions flow_options(const ProblemSpec& spec, int threads) {
    FlowOptions opt;
    opt.safety = spec.time.safety;
    opt.max_steps = spec.time.max_steps;
    opt.tol_abs = spec.time.tol_abs;
    opt.tol_rel = spec.time.tol_rel;
    opt.diagnostics_every = spec.outputs.diagnostics_every;
    opt.threads = threads;
    return opt;
}

double sup_error_vs(const GraphMap& f, const ExactSolution& sol) {
    const Grid& g = f.grid();
    double worst = 0.0;
    for (NodeId id = 0; id < g.node_count(); ++id) {
        const Vec exact = sol.value(g.position(id));
        double s = 0.0;
        for (int c = 0; c < f.components(); ++c) {
            const double d = f.at(id)[c] - exact[c];
            s += d * d;
        }
        worst = std::max(worst, std::sqrt(s));
    }
    return worst;
}

}  // namespace smcf
