// Case-runner front end: drives ingest -> resources -> scenarios ->
// formulation -> solver for one or more risk postures, reconciles the cost
// breakdown against the returned dispatch, and emits machine-readable
// reports (JSON, CSV, stacked-bar plot data).

#ifndef MGPLAN_REPORT_HPP
#define MGPLAN_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgplan/branch_bound.hpp"
#include "mgplan/domain.hpp"
#include "mgplan/ingest.hpp"
#include "mgplan/scenarios.hpp"

namespace mgplan::report {

/// Stage failures are rethrown as StageError with the pipeline stage name.
struct StageError : std::runtime_error {
    StageError(const std::string& stage_name, const std::string& msg);
    std::string stage;
};

enum class PostureSelect { best, nominal, worst, all };

std::optional<PostureSelect> parse_posture(const std::string& name);

struct RunConfig {
    std::filesystem::path case_file;
    int k_days = 1;
    PostureSelect posture = PostureSelect::all;
    std::uint64_t seed = 1;
    std::optional<CurtailmentMode> curtailment_override;
    std::optional<int> polygon_override;  // 0 disables, >=4 enables
    solver::MilpOptions solver;
    std::optional<solver::ExternalSolverConfig> external;
    std::filesystem::path out_dir;  // empty: no files written by run()
    bool dump_mps = false;
    bool dump_scenarios = false;
};

struct PostureReport {
    scenarios::Posture posture = scenarios::Posture::nominal;
    std::string solver_status;
    double gap = 0.0;
    long explored_nodes = 0;
    std::map<std::string, bool> built;
    double invest_cost = 0.0;   // currency/yr
    double operating_cost = 0.0;
    double total_cost = 0.0;
    double curtailed_mwh = 0.0;
    double spilled_mwh = 0.0;
    double solver_objective = 0.0;  // raw MILP objective for reconciliation
    double wall_time_s = 0.0;
};

struct PlanReport {
    std::string case_name;
    int k_days = 1;
    std::uint64_t seed = 1;
    std::vector<PostureReport> postures;

    const PostureReport* find(scenarios::Posture p) const;
};

/// Runs the full pipeline for the configured posture(s). Postures execute
/// concurrently; results are ordered best, nominal, worst.
PlanReport run(const RunConfig& config);

enum class ReportFormat { json, csv, plotdata };

/// Writes report.json / costs.csv / plotdata.csv into out_dir and returns
/// the paths written.
std::vector<std::filesystem::path> emit_report(const PlanReport& report,
                                               ReportFormat format,
                                               const std::filesystem::path& out_dir);

nlohmann::ordered_json to_json(const PlanReport& report);
PlanReport report_from_json(const nlohmann::ordered_json& j);

struct SweepResult {
    std::vector<PlanReport> reports;  // ascending k
    // posture -> smallest k in the list after which the investment plan
    // stays unchanged (-1 if it never settles)
    std::map<std::string, int> stable_from_k;
};

/// One run per (deduplicated, sorted) k with a shared seed. Duplicate k
/// values are dropped with a warning on stderr.
SweepResult sweep(const RunConfig& config, std::vector<int> k_list);

/// Convergence table (`k,posture,invest_mgbp,operating_mgbp,total_mgbp,
/// plan,stable`).
void write_sweep_csv(const SweepResult& result,
                     const std::filesystem::path& path);

}  // namespace mgplan::report

#endif
