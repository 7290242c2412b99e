#pragma once

// JSON documents read and written by the command-line tool.
//
// Problem file (schema "gcp-problem/1"):
//   {
//     "schema": "gcp-problem/1",
//     "circles": [{"center": [x, y], "radius": r}, ...],
//     "ell": 1,
//     "lambdas": [0.0, ...],          // radians, one per circle
//     "n": 128,                       // nodes per circle, even
//     "gamma": {"samples": [[...n values...], ...]}
//           | {"builtin": "fourier", "cos": [[c0, c1, ...], ...], "sin": [[s1, s2, ...], ...]}
//           | {"builtin": "manufactured", "seed": 7, "P": 2}
//   }
// For "fourier", gamma_j(t) = sum_k cos[j][k] cos(kt) + sum_k sin[j][k] sin((k+1)t).
//
// Solution file (schema "gcp-solution/1") echoes the problem and stores
// m x n arrays gamma, mu, h, psi_re, psi_im, the constants tables and
// diagnostics.

#include "gcp/errors.hpp"
#include "gcp/geometry.hpp"
#include "gcp/kernels.hpp"
#include "gcp/nystrom.hpp"
#include "gcp/oracle.hpp"
#include "gcp/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace gcp::io {

using nlohmann::json;

inline constexpr const char* problem_schema = "gcp-problem/1";
inline constexpr const char* solution_schema = "gcp-solution/1";

struct SampledGamma {
    std::vector<std::vector<double>> samples;
};

struct FourierGamma {
    std::vector<std::vector<double>> cos;
    std::vector<std::vector<double>> sin;
};

struct ManufacturedGamma {
    std::uint64_t seed = 0;
    int poles = 1;
};

using GammaSource = std::variant<SampledGamma, FourierGamma, ManufacturedGamma>;

/// Parsed but not yet validated problem document.
struct ProblemFile {
    std::vector<Circle> circles;
    int ell = 0;
    std::vector<double> lambdas;
    std::size_t n = 0;
    GammaSource gamma;
};

namespace detail {

inline const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw InputError(path.empty() ? "/" : path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(path + "/" + key, "missing field \"" + key + "\"");
    return *it;
}

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw InputError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError(path, "expected a finite number");
    return v;
}

inline long long integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw InputError(path, "expected an integer");
    return j.get<long long>();
}

inline std::vector<double> number_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw InputError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "/" + std::to_string(i)));
    return out;
}

inline std::vector<std::vector<double>> table(const json& j, const std::string& path) {
    if (!j.is_array()) throw InputError(path, "expected an array of arrays");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_list(j[i], path + "/" + std::to_string(i)));
    return out;
}

inline void check_schema(const json& doc, const char* expected) {
    const json& s = require(doc, "schema", "");
    if (!s.is_string() || s.get<std::string>() != expected)
        throw InputError("/schema", "unrecognized schema (expected \"" + std::string(expected) + "\")");
}

inline std::vector<Circle> parse_circles(const json& doc) {
    const json& arr = require(doc, "circles", "");
    if (!arr.is_array() || arr.empty()) throw InputError("/circles", "expected a non-empty array");
    std::vector<Circle> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = "/circles/" + std::to_string(i);
        const auto center = number_list(require(arr[i], "center", p), p + "/center");
        if (center.size() != 2) throw InputError(p + "/center", "expected [x, y]");
        out.push_back({Complex(center[0], center[1]), number(require(arr[i], "radius", p), p + "/radius")});
    }
    return out;
}

inline json table_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

template <typename F>
json grid_table(const Grid& g, F&& value) {
    json out = json::array();
    for (std::size_t j = 0; j < g.circles(); ++j) {
        json row = json::array();
        for (std::size_t i = 0; i < g.nodes_per_circle(); ++i) row.push_back(value(j, i));
        out.push_back(std::move(row));
    }
    return out;
}

inline RealGridFunction grid_from_table(const std::vector<std::vector<double>>& t, const Grid& g,
                                        const std::string& path) {
    if (t.size() != g.circles())
        throw InputError(path, "expected " + std::to_string(g.circles()) + " rows, got " + std::to_string(t.size()));
    RealGridFunction f(g);
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (t[j].size() != g.nodes_per_circle())
            throw InputError(path + "/" + std::to_string(j), "expected " + std::to_string(g.nodes_per_circle()) +
                                                                  " samples, got " + std::to_string(t[j].size()));
        for (std::size_t i = 0; i < t[j].size(); ++i) f(j, i) = t[j][i];
    }
    return f;
}

} // namespace detail

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path, "cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path, std::string("invalid JSON: ") + e.what());
    }
}

/// Structural parse; throws InputError carrying the offending field path.
inline ProblemFile parse_problem(const json& doc) {
    using namespace detail;
    check_schema(doc, problem_schema);
    ProblemFile pf;
    pf.circles = parse_circles(doc);
    const long long ell = integer(require(doc, "ell", ""), "/ell");
    if (ell < 0) throw InputError("/ell", "must be nonnegative");
    pf.ell = static_cast<int>(ell);
    pf.lambdas = number_list(require(doc, "lambdas", ""), "/lambdas");
    if (pf.lambdas.size() != pf.circles.size())
        throw InputError("/lambdas", "expected " + std::to_string(pf.circles.size()) + " values (one per circle)");
    const long long n = integer(require(doc, "n", ""), "/n");
    if (n < 4 || n % 2 != 0) throw InputError("/n", "must be an even integer >= 4");
    if (2 * ell >= n) throw InputError("/n", "must exceed 2*ell");
    pf.n = static_cast<std::size_t>(n);

    const json& g = require(doc, "gamma", "");
    if (!g.is_object()) throw InputError("/gamma", "expected an object");
    if (g.contains("samples")) {
        pf.gamma = SampledGamma{table(g["samples"], "/gamma/samples")};
    } else if (g.contains("builtin")) {
        const json& kind = g["builtin"];
        if (!kind.is_string()) throw InputError("/gamma/builtin", "expected a string");
        if (kind == "fourier") {
            FourierGamma f;
            if (g.contains("cos")) f.cos = table(g["cos"], "/gamma/cos");
            if (g.contains("sin")) f.sin = table(g["sin"], "/gamma/sin");
            for (const auto* t : {&f.cos, &f.sin})
                if (!t->empty() && t->size() != pf.circles.size())
                    throw InputError("/gamma", "fourier coefficient lists need one row per circle");
            pf.gamma = f;
        } else if (kind == "manufactured") {
            const long long seed = integer(require(g, "seed", "/gamma"), "/gamma/seed");
            const long long poles = integer(require(g, "P", "/gamma"), "/gamma/P");
            if (seed < 0) throw InputError("/gamma/seed", "must be nonnegative");
            if (poles < 1) throw InputError("/gamma/P", "must be >= 1");
            pf.gamma = ManufacturedGamma{static_cast<std::uint64_t>(seed), static_cast<int>(poles)};
        } else {
            throw InputError("/gamma/builtin", "unknown generator \"" + kind.get<std::string>() + "\"");
        }
    } else {
        throw InputError("/gamma", "expected \"samples\" or \"builtin\"");
    }
    return pf;
}

/// A validated problem; `truth` is set for manufactured data.
struct LoadedProblem {
    ProblemSpec spec;
    std::optional<ManufacturedProblem> truth;
};

inline RealGridFunction fourier_gamma(const FourierGamma& f, const Grid& g) {
    return RealGridFunction::sample(g, [&](ParamPoint p) {
        double v = 0.0;
        if (!f.cos.empty())
            for (std::size_t k = 0; k < f.cos[p.circle].size(); ++k)
                v += f.cos[p.circle][k] * std::cos(static_cast<double>(k) * p.t);
        if (!f.sin.empty())
            for (std::size_t k = 0; k < f.sin[p.circle].size(); ++k)
                v += f.sin[p.circle][k] * std::sin(static_cast<double>(k + 1) * p.t);
        return v;
    });
}

/// Validates the domain (DomainError/OverlapError) and builds the problem at
/// grid size n. Sampled gamma is only available at the file's own n.
inline LoadedProblem build_problem(const ProblemFile& pf, std::size_t n) {
    CircleDomain d = validate_domain(pf.circles);
    Coefficient c{pf.ell, pf.lambdas};
    const Grid g = uniform_grid(d, n);
    if (const auto* s = std::get_if<SampledGamma>(&pf.gamma)) {
        if (n != pf.n) throw GridError("sampled gamma is only defined at n=" + std::to_string(pf.n));
        return {make_problem(std::move(d), std::move(c), detail::grid_from_table(s->samples, g, "/gamma/samples")),
                std::nullopt};
    }
    if (const auto* f = std::get_if<FourierGamma>(&pf.gamma))
        return {make_problem(std::move(d), std::move(c), fourier_gamma(*f, g)), std::nullopt};
    const auto& mg = std::get<ManufacturedGamma>(pf.gamma);
    ManufacturedProblem mp = manufacture(d, c, mg.seed, mg.poles, n);
    ProblemSpec spec = mp.spec;
    return {std::move(spec), std::move(mp)};
}

inline json to_json(const VerifyReport& r) {
    json pts = json::array();
    for (const auto& z : r.interior_points) pts.push_back({z.real(), z.imag()});
    return {{"boundary_error", r.boundary_error},
            {"constants_error", r.constants_error},
            {"interior_error", r.interior_error},
            {"h_error", r.h_error},
            {"interior_points", pts}};
}

inline json to_json(const NullspaceReport& r) {
    return {{"expected_null_I_plus_N", r.expected_plus},
            {"null_I_plus_N", r.plus_dim},
            {"null_I_minus_N", r.minus_dim},
            {"gap_I_plus_N", r.plus_gap},
            {"gap_I_minus_N", r.minus_gap},
            {"sigma_min_I_minus_N", r.minus_sigma_min},
            {"condition_I_minus_N", r.minus_condition},
            {"relative_threshold", NullspaceReport::relative_threshold},
            {"required_gap", NullspaceReport::required_gap}};
}

inline json problem_json(const ProblemSpec& p) {
    json circles = json::array();
    for (const auto& c : p.domain.circles())
        circles.push_back({{"center", {c.center.real(), c.center.imag()}}, {"radius", c.radius}});
    return {{"circles", circles}, {"ell", p.coeff.ell}, {"lambdas", p.coeff.lambdas}, {"n", p.n()}};
}

inline json solution_json(const Solution& s) {
    const Grid& g = s.problem.grid();
    json doc;
    doc["schema"] = solution_schema;
    doc["problem"] = problem_json(s.problem);
    doc["grid"] = {{"m", g.circles()}, {"n", g.nodes_per_circle()}, {"weight", g.weight()},
                   {"nodes", "t_i = 2*pi*i/n, i = 0..n-1, clockwise eta_j(t) = z_j + r_j exp(-i t)"}};
    doc["gamma"] = detail::grid_table(g, [&](std::size_t j, std::size_t i) { return s.problem.gamma(j, i); });
    doc["mu"] = detail::grid_table(g, [&](std::size_t j, std::size_t i) { return s.mu(j, i); });
    doc["h"] = detail::grid_table(g, [&](std::size_t j, std::size_t i) { return s.h(j, i); });
    doc["psi_re"] = detail::grid_table(g, [&](std::size_t j, std::size_t i) { return s.psi_boundary(j, i).real(); });
    doc["psi_im"] = detail::grid_table(g, [&](std::size_t j, std::size_t i) { return s.psi_boundary(j, i).imag(); });
    doc["constants"] = {{"a", detail::table_json(s.constants.a_table())},
                        {"b", detail::table_json(s.constants.b_table())}};
    doc["diagnostics"] = {{"boundary_residual", boundary_residual(s)},
                          {"bandlimit_residual", residual_bandlimit(s.h, s.problem.coeff.ell, s.problem.gamma.sup_norm())},
                          {"fredholm_residual", s.fredholm_residual},
                          {"condition_estimate", s.condition_estimate},
                          {"warnings", s.problem.domain.warnings()}};
    return doc;
}

/// Domain and boundary values of Psi read back from a solution document.
struct StoredSolution {
    CircleDomain domain;
    Coefficient coeff;
    ComplexGridFunction psi_boundary;
    Constants constants;
};

inline StoredSolution parse_solution(const json& doc) {
    using namespace detail;
    check_schema(doc, solution_schema);
    const json& prob = require(doc, "problem", "");
    std::vector<Circle> circles;
    try {
        circles = parse_circles(prob);
    } catch (const InputError& e) {
        throw InputError("/problem" + e.path(), "invalid circle data");
    }
    CircleDomain d = validate_domain(std::move(circles));
    const long long ell = integer(require(prob, "ell", "/problem"), "/problem/ell");
    if (ell < 0) throw InputError("/problem/ell", "must be nonnegative");
    Coefficient c{static_cast<int>(ell), number_list(require(prob, "lambdas", "/problem"), "/problem/lambdas")};
    if (c.lambdas.size() != d.size()) throw InputError("/problem/lambdas", "one value per circle expected");
    const long long n = integer(require(prob, "n", "/problem"), "/problem/n");
    if (n < 4 || n % 2 != 0) throw InputError("/problem/n", "must be an even integer >= 4");
    const Grid g = uniform_grid(d, static_cast<std::size_t>(n));

    const RealGridFunction re = grid_from_table(table(require(doc, "psi_re", ""), "/psi_re"), g, "/psi_re");
    const RealGridFunction im = grid_from_table(table(require(doc, "psi_im", ""), "/psi_im"), g, "/psi_im");
    ComplexGridFunction psi(g);
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(g.size()); ++r)
        psi.values()[r] = Complex(re.values()[r], im.values()[r]);

    Constants k(d.size(), c.ell);
    const json& cj = require(doc, "constants", "");
    const auto a = table(require(cj, "a", "/constants"), "/constants/a");
    const auto b = table(require(cj, "b", "/constants"), "/constants/b");
    if (a.size() != d.size() || b.size() != d.size()) throw InputError("/constants", "one row per circle expected");
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (a[j].size() != static_cast<std::size_t>(c.ell + 1) || b[j].size() != static_cast<std::size_t>(c.ell))
            throw InputError("/constants", "row " + std::to_string(j) + " has the wrong length for ell");
        for (int q = 0; q <= c.ell; ++q) k.a(j, q) = a[j][static_cast<std::size_t>(q)];
        for (int q = 1; q <= c.ell; ++q) k.b(j, q) = b[j][static_cast<std::size_t>(q - 1)];
    }
    return {std::move(d), std::move(c), std::move(psi), std::move(k)};
}

} // namespace gcp::io
