// dcflow: condition checks, solvers and Monte-Carlo batches for DC power flow.
//
// Exit codes: 0 success/converged, 1 usage, 2 case parse error,
//             3 validation error, 4 solver did not converge.

#include "dcflow/caseio.hpp"
#include "dcflow/conditions.hpp"
#include "dcflow/energy.hpp"
#include "dcflow/errors.hpp"
#include "dcflow/harness.hpp"
#include "dcflow/monotone.hpp"
#include "dcflow/zbus.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using dcflow::Method;
using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNotConverged = 4;

struct CommonCaseFlags {
    std::string path;
    std::optional<int> q;
    std::vector<double> band; // v_min v_max
};

void add_case_flags(CLI::App* cmd, CommonCaseFlags& flags) {
    cmd->add_option("case", flags.path, "case file (JSON)")->required();
    cmd->add_option("--q", flags.q, "norm order: 1, 2 or 0 for infinity");
    cmd->add_option("--band", flags.band, "override band as v_min v_max (pu)")->expected(2);
}

dcflow::Network load_network(const CommonCaseFlags& flags) {
    dcflow::Network net = dcflow::load_case(flags.path);
    if (flags.q) net.q = dcflow::norm_order_from_int(*flags.q);
    if (!flags.band.empty()) {
        if (!(flags.band[0] > 0.0 && flags.band[0] < flags.band[1]))
            throw dcflow::ParseError("band: requires 0 < v_min < v_max");
        net.band = dcflow::VoltageBand::from_voltages(flags.band[0], flags.band[1]);
    }
    return net;
}

struct SolveFlags {
    CommonCaseFlags common;
    std::string method = "auto";
    std::optional<double> tol;
    int max_iter = 10000;
    std::string trace_path;
};

int run_solve(const SolveFlags& flags, bool force_trace) {
    const dcflow::Network net = load_network(flags.common);
    const dcflow::DerivedModel model = dcflow::derive(net);

    std::string method = flags.method;
    std::string rationale;
    if (method == "auto") {
        const auto report = dcflow::build_report(model, net.band, net.q);
        method = dcflow::method_name(report.recommended.method);
        rationale = report.recommended.rationale;
        std::cerr << "auto-selected method: " << method << " (" << rationale << ")\n";
    }

    dcflow::SolveOptions opts;
    opts.max_iter = flags.max_iter;
    opts.record_trace = force_trace || !flags.trace_path.empty();
    opts.tol = flags.tol.value_or(method == "energy" ? dcflow::kEnergyDefaultTol : 1e-6);

    dcflow::SolveResult result;
    json out;
    if (method == "zbus") {
        auto zb = dcflow::solve_zbus(model, net.band, opts);
        result = std::move(zb.result);
        out = dcflow::result_to_json(result, method);
        out["diagnostics"] = dcflow::diagnostics_to_json(zb.diagnostics);
    } else if (method == "monotone") {
        result = dcflow::solve_monotone(model, net.band, opts);
        out = dcflow::result_to_json(result, method);
    } else if (method == "energy") {
        result = dcflow::solve_energy(model, net.band, opts);
        out = dcflow::result_to_json(result, method);
    } else {
        std::cerr << "unknown method '" << method << "'\n";
        return kExitUsage;
    }
    if (!rationale.empty()) out["selected_by"] = rationale;

    if (!flags.trace_path.empty()) {
        std::ofstream trace(flags.trace_path);
        if (!trace) {
            std::cerr << "cannot open trace file " << flags.trace_path << "\n";
            return kExitUsage;
        }
        dcflow::write_trace_csv(trace, result);
        std::cerr << "trace written to " << flags.trace_path << " (" << result.trace.size()
                  << " rows)\n";
    }

    std::cout << out.dump(2) << "\n";
    return result.status == dcflow::SolveStatus::Converged ? 0 : kExitNotConverged;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DC power-flow solvers with checkable convergence conditions"};
    app.require_subcommand(1);

    CommonCaseFlags check_flags;
    CLI::App* check = app.add_subcommand("check", "evaluate every sufficient condition and "
                                                  "recommend a solver");
    add_case_flags(check, check_flags);

    SolveFlags solve_flags;
    CLI::App* solve = app.add_subcommand("solve", "solve the power-flow equations");
    add_case_flags(solve, solve_flags.common);
    solve->add_option("--method", solve_flags.method, "auto|monotone|zbus|energy")
        ->check(CLI::IsMember({"auto", "monotone", "zbus", "energy"}));
    solve->add_option("--tol", solve_flags.tol, "stopping tolerance");
    solve->add_option("--max-iter", solve_flags.max_iter, "iteration cap")
        ->check(CLI::PositiveNumber);
    solve->add_option("--trace", solve_flags.trace_path, "write per-iteration trace CSV");

    SolveFlags trace_flags;
    CLI::App* trace = app.add_subcommand("trace", "solve and export the convergence trace");
    add_case_flags(trace, trace_flags.common);
    trace->add_option("--method", trace_flags.method, "auto|monotone|zbus|energy")
        ->check(CLI::IsMember({"auto", "monotone", "zbus", "energy"}));
    trace->add_option("--tol", trace_flags.tol, "stopping tolerance");
    trace->add_option("--max-iter", trace_flags.max_iter, "iteration cap")
        ->check(CLI::PositiveNumber);
    trace->add_option("--out", trace_flags.trace_path, "trace CSV path")->required();

    CommonCaseFlags mc_flags;
    int mc_trials = 100;
    std::uint64_t mc_seed = 0;
    std::vector<double> p_range{-10.0, 10.0};
    std::vector<double> iz_range{0.0, 10.0};
    std::string mc_out, mc_csv;
    CLI::App* mc = app.add_subcommand("montecarlo", "randomized loading study over a base case");
    add_case_flags(mc, mc_flags);
    mc->add_option("--trials", mc_trials, "number of trials")->check(CLI::PositiveNumber);
    mc->add_option("--seed", mc_seed, "RNG seed");
    mc->add_option("--p-range", p_range, "constant-power scale range")->expected(2);
    mc->add_option("--iz-range", iz_range, "current/conductance scale range")->expected(2);
    mc->add_option("--out", mc_out, "also write the summary JSON to this path");
    mc->add_option("--csv", mc_csv, "stream per-trial records to this CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (check->parsed()) {
            const dcflow::Network net = load_network(check_flags);
            const dcflow::DerivedModel model = dcflow::derive(net);
            const auto report = dcflow::build_report(model, net.band, net.q);
            std::cout << dcflow::report_to_json(report).dump(2) << "\n";
            return 0;
        }
        if (solve->parsed()) return run_solve(solve_flags, false);
        if (trace->parsed()) return run_solve(trace_flags, true);
        if (mc->parsed()) {
            const dcflow::Network net = load_network(mc_flags);
            dcflow::validate(net);
            dcflow::McConfig cfg;
            cfg.trials = mc_trials;
            cfg.seed = mc_seed;
            cfg.p_scale_range = {p_range[0], p_range[1]};
            cfg.iz_scale_range = {iz_range[0], iz_range[1]};
            std::ofstream csv;
            if (!mc_csv.empty()) {
                csv.open(mc_csv);
                if (!csv) {
                    std::cerr << "cannot open " << mc_csv << "\n";
                    return kExitUsage;
                }
                cfg.trial_csv = &csv;
            }
            const auto summary = dcflow::run_monte_carlo(net, cfg);
            const json out = dcflow::mc_summary_to_json(summary);
            if (!mc_out.empty()) {
                std::ofstream f(mc_out);
                if (!f) {
                    std::cerr << "cannot open " << mc_out << "\n";
                    return kExitUsage;
                }
                f << out.dump(2) << "\n";
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }
    } catch (const dcflow::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const dcflow::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
