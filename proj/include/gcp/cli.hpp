#pragma once

// Command implementations behind the `gcp` executable. Each command returns
// the process exit status and writes human-readable messages to `log`.

#include "gcp/errors.hpp"
#include "gcp/io.hpp"
#include "gcp/oracle.hpp"
#include "gcp/solver.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace gcp::cli {

enum ExitCode : int {
    ok = 0,
    malformed_input = 1,
    invalid_domain = 2,
    near_singular = 3,
    rejected_point = 4,
    diagnosis_failed = 5,
};

struct SolveOptions {
    std::string input;
    std::string output;  // empty: stdout
    bool timing = true;
};

struct EvalOptions {
    std::string solution;
    std::string points_file;          // CSV "x,y" per line
    std::vector<Complex> inline_points;
    std::string output;               // empty: stdout; ".json" suffix selects JSON
    bool partial = false;
};

struct DiagnoseOptions {
    std::string input;
    std::vector<std::size_t> sweep{32, 64, 128, 256};
};

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string short_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path, "cannot open output file");
    out << text;
}

// Runs body and maps library errors to exit codes.
template <typename Body>
int guarded(std::ostream& log, Body&& body) {
    try {
        return body();
    } catch (const InputError& e) {
        log << "error: malformed input: " << e.what() << '\n';
        return malformed_input;
    } catch (const nlohmann::json::exception& e) {
        log << "error: malformed input: " << e.what() << '\n';
        return malformed_input;
    } catch (const GridError& e) {
        log << "error: malformed input: " << e.what() << '\n';
        return malformed_input;
    } catch (const ShapeError& e) {
        log << "error: malformed input: " << e.what() << '\n';
        return malformed_input;
    } catch (const DomainError& e) {
        log << "error: invalid domain: " << e.what() << '\n';
        return invalid_domain;
    } catch (const NearSingularError& e) {
        log << "error: near-singular system: " << e.what() << '\n';
        return near_singular;
    } catch (const PointError& e) {
        log << "error: " << e.what() << '\n';
        return rejected_point;
    } catch (const SpectralGapError& e) {
        log << "error: " << e.what() << '\n';
        return diagnosis_failed;
    }
}

/// Trigonometric interpolation of equispaced samples onto n_new nodes
/// (Nyquist modes dropped).
inline RealGridFunction resample(const RealGridFunction& f, const Grid& target) {
    const Grid& g = f.grid();
    const std::size_t n = g.nodes_per_circle();
    const std::size_t n_new = target.nodes_per_circle();
    if (n_new == n) return f;
    Eigen::FFT<double> fft;
    RealGridFunction out(target);
    const std::size_t keep = std::min(n, n_new) / 2;  // modes |k| < keep
    for (std::size_t j = 0; j < g.circles(); ++j) {
        std::vector<double> time(n);
        for (std::size_t i = 0; i < n; ++i) time[i] = f(j, i);
        std::vector<Complex> freq;
        fft.fwd(freq, time);
        std::vector<Complex> wide(n_new, 0.0);
        const double scale = static_cast<double>(n_new) / static_cast<double>(n);
        for (std::size_t k = 0; k < keep; ++k) {
            wide[k] = scale * freq[k];
            if (k > 0) wide[n_new - k] = scale * freq[n - k];
        }
        std::vector<Complex> back;
        fft.inv(back, wide);
        for (std::size_t i = 0; i < n_new; ++i) out(j, i) = back[i].real();
    }
    return out;
}

inline std::vector<Complex> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path, "cannot open points file");
    std::vector<Complex> pts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        for (char& ch : line)
            if (ch == ',' || ch == ';') ch = ' ';
        std::istringstream fields(line);
        double x = 0.0;
        double y = 0.0;
        if (!(fields >> x >> y)) {
            if (pts.empty() && line_no == 1) continue;  // header row
            throw InputError(path + ":" + std::to_string(line_no), "expected two numbers \"x,y\"");
        }
        pts.emplace_back(x, y);
    }
    return pts;
}

} // namespace detail

/// Parses "x,y" into a complex number.
inline Complex parse_point(const std::string& text) {
    std::string s = text;
    for (char& ch : s)
        if (ch == ',') ch = ' ';
    std::istringstream in(s);
    double x = 0.0;
    double y = 0.0;
    if (!(in >> x >> y)) throw InputError("--point", "expected \"x,y\", got \"" + text + "\"");
    return {x, y};
}

inline int cmd_solve(const SolveOptions& opt, std::ostream& log) {
    return detail::guarded(log, [&] {
        const io::ProblemFile pf = io::parse_problem(io::read_json_file(opt.input));
        const io::LoadedProblem lp = io::build_problem(pf, pf.n);
        for (const auto& w : lp.spec.domain.warnings()) log << "warning: " << w << '\n';

        const auto start = std::chrono::steady_clock::now();
        const Solution s = solve_gcp(lp.spec);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        nlohmann::json doc = io::solution_json(s);
        if (lp.truth) doc["verification"] = io::to_json(verify(*lp.truth, s));
        if (opt.timing) doc["timing"] = {{"solve_seconds", seconds}};
        detail::write_text(opt.output, doc.dump(2) + "\n");

        log << "solved m=" << s.problem.domain.size() << " ell=" << s.problem.coeff.ell << " n=" << s.problem.n()
            << ": boundary residual " << detail::short_double(boundary_residual(s)) << ", condition estimate "
            << detail::short_double(s.condition_estimate) << '\n';
        return static_cast<int>(ok);
    });
}

inline int cmd_eval(const EvalOptions& opt, std::ostream& log) {
    return detail::guarded(log, [&] {
        const io::StoredSolution sol = io::parse_solution(io::read_json_file(opt.solution));
        std::vector<Complex> points;
        if (!opt.points_file.empty()) points = detail::read_points_csv(opt.points_file);
        points.insert(points.end(), opt.inline_points.begin(), opt.inline_points.end());

        const std::size_t n = sol.psi_boundary.grid().nodes_per_circle();
        std::vector<Complex> accepted;
        std::size_t rejected = 0;
        for (std::size_t q = 0; q < points.size(); ++q) {
            const PointStatus st = classify_point(sol.domain, n, points[q]);
            if (st == PointStatus::inside) {
                log << "error: point " << q + 1 << " (" << detail::format_double(points[q].real()) << ", "
                    << detail::format_double(points[q].imag()) << ") lies inside or on a disk\n";
                ++rejected;
                continue;
            }
            if (st == PointStatus::near_boundary)
                log << "warning: point " << q + 1 << " is within the near-boundary margin; accuracy is reduced\n";
            accepted.push_back(points[q]);
        }
        if (rejected > 0 && !opt.partial) return static_cast<int>(rejected_point);

        const std::vector<Complex> values = cauchy_evaluate(sol.domain, sol.psi_boundary, accepted);
        std::string text;
        if (detail::ends_with(opt.output, ".json")) {
            nlohmann::json arr = nlohmann::json::array();
            for (std::size_t q = 0; q < values.size(); ++q)
                arr.push_back({{"x", accepted[q].real()},
                               {"y", accepted[q].imag()},
                               {"re", values[q].real()},
                               {"im", values[q].imag()}});
            text = nlohmann::json{{"points", arr}}.dump(2) + "\n";
        } else {
            text = "x,y,re,im\n";
            for (std::size_t q = 0; q < values.size(); ++q)
                text += detail::format_double(accepted[q].real()) + "," + detail::format_double(accepted[q].imag()) +
                        "," + detail::format_double(values[q].real()) + "," +
                        detail::format_double(values[q].imag()) + "\n";
        }
        detail::write_text(opt.output, text);
        return static_cast<int>(rejected > 0 ? rejected_point : ok);
    });
}

inline int cmd_diagnose(const DiagnoseOptions& opt, std::ostream& out) {
    return detail::guarded(out, [&] {
        const io::ProblemFile pf = io::parse_problem(io::read_json_file(opt.input));
        const io::LoadedProblem base = io::build_problem(pf, pf.n);
        const CircleDomain& d = base.spec.domain;
        const Coefficient& c = base.spec.coeff;

        std::optional<double> lu_condition;
        try {
            lu_condition = FredholmSolver(assemble_N(d, c, base.spec.grid())).condition_estimate();
        } catch (const NearSingularError& e) {
            lu_condition = e.condition();
        }
        for (const auto& w : d.warnings())
            out << "warning: " << w << "; condition estimate of I-N " << detail::short_double(*lu_condition) << '\n';

        std::size_t n_diag = pf.n;
        const std::size_t n_min = 16 * static_cast<std::size_t>(c.ell + 1);
        if (n_diag < n_min) {
            out << "note: n=" << n_diag << " is below 16(ell+1); null-space counts use n=" << n_min << '\n';
            n_diag = n_min;
        }
        const NullspaceReport r = nullspace_report(d, c, n_diag);
        out << "m=" << d.size() << " ell=" << c.ell << " total index=" << c.total_index() << " n=" << n_diag << '\n';
        out << "dim Null(I+N): expected " << r.expected_plus << " / observed " << r.plus_dim << " (gap "
            << detail::short_double(r.plus_gap) << ")\n";
        out << "dim Null(I-N): expected 0 / observed " << r.minus_dim << (r.minus_dim == 0 ? "; I-N nonsingular" : "")
            << " (gap " << detail::short_double(r.minus_gap) << ")\n";
        out << "smallest singular value of I-N: " << detail::short_double(r.minus_sigma_min) << '\n';
        out << "condition of I-N: svd " << detail::short_double(r.minus_condition) << ", lu estimate "
            << detail::short_double(*lu_condition) << '\n';

        out << "convergence:\n";
        out << "       n  boundary_res  bandlimit_res   condition   d_constants" << (base.truth ? "   truth_error" : "")
            << '\n';
        std::optional<Constants> finest;
        struct Row {
            std::size_t n;
            std::optional<Solution> sol;
            std::optional<double> truth_error;
            std::string failure;
        };
        std::vector<Row> rows;
        for (std::size_t n : opt.sweep) {
            Row row{n, std::nullopt, std::nullopt, {}};
            try {
                const Grid g = uniform_grid(d, n);
                std::optional<io::LoadedProblem> lp;
                if (std::holds_alternative<io::SampledGamma>(pf.gamma))
                    lp = io::LoadedProblem{make_problem(d, c, detail::resample(base.spec.gamma, g)), std::nullopt};
                else
                    lp = io::build_problem(pf, n);
                row.sol = solve_gcp(lp->spec);
                if (lp->truth) row.truth_error = verify(*lp->truth, *row.sol).max_error();
            } catch (const Error& e) {
                row.failure = e.what();
            }
            rows.push_back(std::move(row));
        }
        for (auto it = rows.rbegin(); it != rows.rend(); ++it)
            if (it->sol) {
                finest = it->sol->constants;
                break;
            }
        for (const auto& row : rows) {
            out << std::setw(8) << row.n;
            if (!row.sol) {
                out << "  failed: " << row.failure << '\n';
                continue;
            }
            const Solution& s = *row.sol;
            out << "  " << std::setw(12) << detail::short_double(boundary_residual(s)) << "  " << std::setw(13)
                << detail::short_double(residual_bandlimit(s.h, c.ell, s.problem.gamma.sup_norm())) << "  " << std::setw(10)
                << detail::short_double(s.condition_estimate) << "  " << std::setw(12)
                << detail::short_double(s.constants.max_difference(*finest));
            if (row.truth_error) out << "  " << std::setw(12) << detail::short_double(*row.truth_error);
            out << '\n';
        }

        if (!r.matches_theory() || !r.gaps_ok()) {
            out << "FAIL: observed null-space dimensions (" << r.plus_dim << ", " << r.minus_dim
                << ") disagree with (m(2ell+1), 0) = (" << r.expected_plus << ", 0) or the 1e3 spectral gap is missing\n";
            return static_cast<int>(diagnosis_failed);
        }
        out << "OK\n";
        return static_cast<int>(ok);
    });
}

} // namespace gcp::cli
