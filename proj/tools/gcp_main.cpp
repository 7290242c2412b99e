#include "gcp/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"Boundary integral solver for the general conjugation problem on circle domains"};
    app.require_subcommand(1);

    gcp::cli::SolveOptions solve;
    auto* solve_cmd = app.add_subcommand("solve", "Solve a problem file and write a solution file");
    solve_cmd->add_option("-i,--input", solve.input, "Problem JSON")->required();
    solve_cmd->add_option("-o,--output", solve.output, "Solution JSON (default: stdout)");
    bool no_timing = false;
    solve_cmd->add_flag("--no-timing", no_timing, "Omit wall-clock timing so output is byte-stable");

    gcp::cli::EvalOptions eval;
    std::vector<std::string> inline_points;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate Psi at points of the domain from a solution file");
    eval_cmd->add_option("-i,--input", eval.solution, "Solution JSON")->required();
    eval_cmd->add_option("-p,--points", eval.points_file, "CSV file with one \"x,y\" point per line");
    eval_cmd->add_option("-z,--point", inline_points, "Inline point \"x,y\" (repeatable)");
    eval_cmd->add_option("-o,--output", eval.output, "Output CSV, or JSON if the name ends in .json (default: stdout)");
    eval_cmd->add_flag("--partial", eval.partial, "Still report valid points when some are rejected");

    gcp::cli::DiagnoseOptions diagnose;
    auto* diag_cmd = app.add_subcommand("diagnose", "Null-space dimensions, conditioning and a convergence sweep");
    diag_cmd->add_option("-i,--input", diagnose.input, "Problem JSON")->required();

    CLI11_PARSE(app, argc, argv);

    if (*solve_cmd) {
        solve.timing = !no_timing;
        return gcp::cli::cmd_solve(solve, std::cerr);
    }
    if (*eval_cmd) {
        try {
            for (const auto& p : inline_points) eval.inline_points.push_back(gcp::cli::parse_point(p));
        } catch (const gcp::InputError& e) {
            std::cerr << "error: malformed input: " << e.what() << '\n';
            return gcp::cli::malformed_input;
        }
        return gcp::cli::cmd_eval(eval, std::cerr);
    }
    return gcp::cli::cmd_diagnose(diagnose, std::cout);
}
