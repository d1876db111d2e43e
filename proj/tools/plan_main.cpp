// `plan` command-line front end: run a planning case, sweep representative-
// day counts, or solve a standalone MPS file (which also makes the binary
// usable as its own external-solver hand-off target).

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mgplan/branch_bound.hpp"
#include "mgplan/csv.hpp"
#include "mgplan/mps_io.hpp"
#include "mgplan/report.hpp"

namespace {

using mgplan::report::PlanReport;
using mgplan::report::RunConfig;

struct CommonFlags {
    std::string case_file;
    std::string posture = "all";
    std::string curtailment;
    std::string external;
    int polygon = -1;
    std::uint64_t seed = 1;
    std::string out_dir;
    double gap_tol = 1e-6;
    long node_limit = 500000;
    double time_limit = 0.0;
    bool dump_mps = false;
    bool dump_scenarios = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--case", f.case_file, "case description JSON")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--posture", f.posture,
                    "risk posture: best | nominal | worst | all");
    cmd->add_option("--seed", f.seed, "clustering RNG seed");
    cmd->add_option("--out", f.out_dir, "output directory for report files");
    cmd->add_option("--curtailment", f.curtailment,
                    "override curtailment mode: binary | continuous");
    cmd->add_option("--polygon", f.polygon,
                    "polygonal apparent-power limit sides (0 disables)");
    cmd->add_option("--gap", f.gap_tol, "relative MILP gap tolerance");
    cmd->add_option("--node-limit", f.node_limit, "branch-and-bound node limit");
    cmd->add_option("--time-limit", f.time_limit, "solver time limit in seconds");
    cmd->add_option("--external-solver", f.external,
                    "hand the MILP to `<cmd> model.mps out.sol` instead");
    cmd->add_flag("--dump-mps", f.dump_mps, "write model_<posture>.mps to --out");
    cmd->add_flag("--dump-scenarios", f.dump_scenarios,
                  "write scenarios_<posture>.csv to --out");
}

RunConfig to_config(const CommonFlags& f, int k) {
    RunConfig cfg;
    cfg.case_file = f.case_file;
    cfg.k_days = k;
    const auto posture = mgplan::report::parse_posture(f.posture);
    if (!posture) throw CLI::ValidationError("--posture", "unknown posture " + f.posture);
    cfg.posture = *posture;
    cfg.seed = f.seed;
    cfg.out_dir = f.out_dir;
    cfg.dump_mps = f.dump_mps;
    cfg.dump_scenarios = f.dump_scenarios;
    if (!f.curtailment.empty()) {
        if (f.curtailment == "binary")
            cfg.curtailment_override = mgplan::CurtailmentMode::binary;
        else if (f.curtailment == "continuous")
            cfg.curtailment_override = mgplan::CurtailmentMode::continuous;
        else
            throw CLI::ValidationError("--curtailment",
                                       "unknown mode " + f.curtailment);
    }
    if (f.polygon >= 0) cfg.polygon_override = f.polygon;
    cfg.solver.gap_tol = f.gap_tol;
    cfg.solver.node_limit = f.node_limit;
    cfg.solver.time_limit_s = f.time_limit;
    if (!f.external.empty())
        cfg.external = mgplan::solver::ExternalSolverConfig{f.external};
    return cfg;
}

void print_report(const PlanReport& report) {
    fmt::print("case {}  k={}  seed={}\n", report.case_name, report.k_days,
               report.seed);
    for (const auto& r : report.postures) {
        std::string plan;
        for (const auto& [id, on] : r.built)
            if (on) plan += (plan.empty() ? "" : "+") + id;
        if (plan.empty()) plan = "none";
        fmt::print(
            "  {:<8} {:<10} total {:>12.6f} M  (invest {:.6f} M, oper {:.6f} M)"
            "  curtailed {:.3f} MWh  plan {}\n",
            mgplan::scenarios::posture_name(r.posture), r.solver_status,
            r.total_cost / 1e6, r.invest_cost / 1e6, r.operating_cost / 1e6,
            r.curtailed_mwh, plan);
    }
}

int exit_code_for(const PlanReport& report) {
    for (const auto& r : report.postures)
        if (r.solver_status != "optimal") return 2;
    return 0;
}

int cmd_run(const CommonFlags& flags, int k) {
    const PlanReport report = mgplan::report::run(to_config(flags, k));
    print_report(report);
    return exit_code_for(report);
}

int cmd_sweep(const CommonFlags& flags, const std::string& k_list_arg) {
    std::vector<int> k_list;
    std::stringstream ss(k_list_arg);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) k_list.push_back(std::stoi(item));
    const auto result = mgplan::report::sweep(to_config(flags, 1), k_list);
    int rc = 0;
    for (const auto& rep : result.reports) {
        print_report(rep);
        rc = std::max(rc, exit_code_for(rep));
    }
    fmt::print("plan stability (smallest k with an unchanged plan):\n");
    for (const auto& [posture, k] : result.stable_from_k)
        fmt::print("  {:<8} k={}\n", posture, k);
    return rc;
}

int cmd_solve_mps(const std::string& in_path, const std::string& out_path,
                  double gap_tol, long node_limit, double time_limit) {
    const auto model = mgplan::milp::import_mps(in_path);
    mgplan::solver::MilpOptions opt;
    opt.gap_tol = gap_tol;
    opt.node_limit = node_limit;
    opt.time_limit_s = time_limit;
    const auto result = mgplan::solver::solve_milp(model, opt);

    std::ofstream out(out_path);
    if (!out) {
        fmt::print(stderr, "cannot open {} for writing\n", out_path);
        return 1;
    }
    out << "# status " << mgplan::solver::milp_status_name(result.status) << '\n';
    if (result.incumbent) {
        out << "# objective "
            << mgplan::csv::format_double(result.incumbent->objective) << '\n';
        for (int j = 0; j < model.num_variables(); ++j) {
            out << model.variables()[j].name << ' '
                << mgplan::csv::format_double(result.incumbent->values[j]) << '\n';
        }
    }
    fmt::print("{}: {} ({} nodes)\n", in_path,
               mgplan::solver::milp_status_name(result.status),
               result.explored_nodes);
    return result.status == mgplan::solver::MilpStatus::optimal ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"microgrid investment planning"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    int run_k = 1;
    auto* run_cmd = app.add_subcommand("run", "solve one case");
    add_common(run_cmd, run_flags);
    run_cmd->add_option("--k", run_k, "number of representative days")
        ->check(CLI::PositiveNumber);

    CommonFlags sweep_flags;
    std::string k_list = "1,5,10";
    auto* sweep_cmd =
        app.add_subcommand("sweep", "solve over several representative-day counts");
    add_common(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--k-list", k_list, "comma-separated k values");

    std::string mps_in, sol_out;
    double mps_gap = 1e-6;
    long mps_nodes = 500000;
    double mps_time = 0.0;
    auto* mps_cmd = app.add_subcommand("solve-mps", "solve a standalone MPS file");
    mps_cmd->add_option("input", mps_in, "MPS file")->required()
        ->check(CLI::ExistingFile);
    mps_cmd->add_option("output", sol_out, "solution file")->required();
    mps_cmd->add_option("--gap", mps_gap, "relative gap tolerance");
    mps_cmd->add_option("--node-limit", mps_nodes, "node limit");
    mps_cmd->add_option("--time-limit", mps_time, "time limit in seconds");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(run_flags, run_k);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, k_list);
        if (mps_cmd->parsed())
            return cmd_solve_mps(mps_in, sol_out, mps_gap, mps_nodes, mps_time);
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 1;
}
