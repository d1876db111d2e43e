#include "mgplan/report.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <set>

#include <fmt/format.h>

#include "mgplan/formulation.hpp"
#include "mgplan/mps_io.hpp"

namespace mgplan::report {

using scenarios::Posture;

StageError::StageError(const std::string& stage_name, const std::string& msg)
    : std::runtime_error(stage_name + ": " + msg), stage(stage_name) {}

std::optional<PostureSelect> parse_posture(const std::string& name) {
    if (name == "best") return PostureSelect::best;
    if (name == "nominal") return PostureSelect::nominal;
    if (name == "worst") return PostureSelect::worst;
    if (name == "all") return PostureSelect::all;
    return std::nullopt;
}

const PostureReport* PlanReport::find(Posture p) const {
    for (const auto& r : postures)
        if (r.posture == p) return &r;
    return nullptr;
}

namespace {

template <typename F>
auto stage(const std::string& name, F&& f) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

struct PostureRun {
    PostureReport report;
    milp::MilpModel model;
    PlanningCase planning_case;
};

PostureRun run_posture(const ingest::CaseInputs& inputs,
                       const scenarios::Triplet& triplet, Posture posture,
                       const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();

    PlanningCase c = stage("formulation", [&] {
        PlanningCase built = ingest::make_case(inputs, triplet.posture_set(posture));
        auto violations = validate_case(built);
        if (!violations.empty())
            throw ingest::CaseValidationError(std::move(violations));
        return built;
    });
    milp::MilpModel model = stage("formulation", [&] { return milp::build_milp(c); });

    solver::BnbResult result = stage("solver", [&] {
        if (config.external) return solver::solve_with_external(model, *config.external);
        // first-stage investment columns close the bound fastest
        solver::MilpOptions opts = config.solver;
        for (const auto& u : c.res_candidates)
            opts.priority_columns.push_back(model.column(milp::names::invest(u.id)));
        for (const auto& u : c.battery_candidates)
            opts.priority_columns.push_back(model.column(milp::names::invest(u.id)));
        return solver::solve_milp(model, opts);
    });

    PostureRun out{{}, std::move(model), std::move(c)};
    out.report.posture = posture;
    out.report.solver_status = solver::milp_status_name(result.status);
    out.report.explored_nodes = result.explored_nodes;
    if (result.incumbent) {
        out.report.gap = result.gap();
        out.report.solver_objective = result.incumbent->objective;
        stage("report", [&] {
            const milp::DispatchSummary s = milp::summarize_dispatch(
                out.planning_case, out.model, result.incumbent->values);
            out.report.built = s.built;
            out.report.invest_cost = s.invest_cost;
            out.report.operating_cost = s.operating_cost();
            out.report.total_cost = s.invest_cost + s.operating_cost();
            out.report.curtailed_mwh = s.curtailed_mwh;
            out.report.spilled_mwh = s.spilled_mwh;
            return 0;
        });
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    out.report.wall_time_s = dt.count();
    return out;
}

std::vector<Posture> selected_postures(PostureSelect sel) {
    switch (sel) {
        case PostureSelect::best: return {Posture::best};
        case PostureSelect::nominal: return {Posture::nominal};
        case PostureSelect::worst: return {Posture::worst};
        case PostureSelect::all:
            return {Posture::best, Posture::nominal, Posture::worst};
    }
    return {};
}

std::string plan_signature(const std::map<std::string, bool>& built) {
    std::string sig;
    for (const auto& [id, on] : built)
        if (on) sig += (sig.empty() ? "" : "+") + id;
    return sig.empty() ? "none" : sig;
}

}  // namespace

PlanReport run(const RunConfig& config) {
    auto [files, case_config] = stage("ingest", [&] {
        return ingest::read_case_json(config.case_file);
    });
    if (config.curtailment_override)
        case_config.curtailment_mode = *config.curtailment_override;
    if (config.polygon_override) {
        if (*config.polygon_override <= 0)
            case_config.polygon_sides.reset();
        else
            case_config.polygon_sides = *config.polygon_override;
    }
    const ingest::CaseInputs inputs = stage("ingest", [&] {
        return ingest::load_inputs(files, case_config);
    });
    const scenarios::Triplet triplet = stage("scenarios", [&] {
        return scenarios::extract_triplet(inputs.profiles, config.k_days,
                                          config.seed, case_config.ranking);
    });

    const auto postures = selected_postures(config.posture);
    std::vector<std::future<PostureRun>> tasks;
    tasks.reserve(postures.size());
    for (Posture p : postures) {
        tasks.push_back(std::async(std::launch::async, [&, p] {
            return run_posture(inputs, triplet, p, config);
        }));
    }

    PlanReport report;
    report.case_name = case_config.name;
    report.k_days = config.k_days;
    report.seed = config.seed;
    std::vector<PostureRun> runs;
    for (auto& t : tasks) runs.push_back(t.get());
    for (const auto& r : runs) report.postures.push_back(r.report);

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        emit_report(report, ReportFormat::json, config.out_dir);
        emit_report(report, ReportFormat::csv, config.out_dir);
        emit_report(report, ReportFormat::plotdata, config.out_dir);
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const std::string pname = scenarios::posture_name(postures[i]);
            if (config.dump_mps) {
                milp::export_mps(runs[i].model,
                                 config.out_dir / fmt::format("model_{}.mps", pname));
            }
            if (config.dump_scenarios) {
                scenarios::write_scenarios_csv(
                    config.out_dir / fmt::format("scenarios_{}.csv", pname),
                    runs[i].planning_case.scenarios);
            }
        }
    }
    return report;
}

namespace {

nlohmann::ordered_json posture_to_json(const PostureReport& r) {
    nlohmann::ordered_json j;
    j["solver_status"] = r.solver_status;
    j["gap"] = r.gap;
    j["explored_nodes"] = r.explored_nodes;
    j["built"] = r.built;
    j["invest_cost_gbp"] = r.invest_cost;
    j["operating_cost_gbp"] = r.operating_cost;
    j["total_cost_gbp"] = r.total_cost;
    j["total_cost_mgbp"] = fmt::format("{:.6f}", r.total_cost / 1e6);
    j["curtailed_mwh"] = r.curtailed_mwh;
    j["spilled_mwh"] = r.spilled_mwh;
    j["solver_objective_gbp"] = r.solver_objective;
    j["wall_time_s"] = r.wall_time_s;
    return j;
}

PostureReport posture_from_json(Posture p, const nlohmann::ordered_json& j) {
    PostureReport r;
    r.posture = p;
    r.solver_status = j.at("solver_status").get<std::string>();
    r.gap = j.at("gap").get<double>();
    r.explored_nodes = j.at("explored_nodes").get<long>();
    r.built = j.at("built").get<std::map<std::string, bool>>();
    r.invest_cost = j.at("invest_cost_gbp").get<double>();
    r.operating_cost = j.at("operating_cost_gbp").get<double>();
    r.total_cost = j.at("total_cost_gbp").get<double>();
    r.curtailed_mwh = j.at("curtailed_mwh").get<double>();
    r.spilled_mwh = j.at("spilled_mwh").get<double>();
    r.solver_objective = j.at("solver_objective_gbp").get<double>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    return r;
}

}  // namespace

nlohmann::ordered_json to_json(const PlanReport& report) {
    nlohmann::ordered_json j;
    j["case"] = report.case_name;
    j["k_days"] = report.k_days;
    j["seed"] = report.seed;
    j["postures"] = nlohmann::ordered_json::object();
    for (const auto& r : report.postures)
        j["postures"][scenarios::posture_name(r.posture)] = posture_to_json(r);
    return j;
}

PlanReport report_from_json(const nlohmann::ordered_json& j) {
    PlanReport report;
    report.case_name = j.at("case").get<std::string>();
    report.k_days = j.at("k_days").get<int>();
    report.seed = j.at("seed").get<std::uint64_t>();
    for (Posture p : {Posture::best, Posture::nominal, Posture::worst}) {
        const std::string name = scenarios::posture_name(p);
        if (j.at("postures").contains(name))
            report.postures.push_back(posture_from_json(p, j.at("postures").at(name)));
    }
    return report;
}

std::vector<std::filesystem::path> emit_report(
    const PlanReport& report, ReportFormat format,
    const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    auto open = [&](const std::filesystem::path& p) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw milp::IoError("cannot open " + p.string() + " for writing");
        return out;
    };
    switch (format) {
        case ReportFormat::json: {
            const auto path = out_dir / "report.json";
            auto out = open(path);
            out << to_json(report).dump(2) << '\n';
            written.push_back(path);
            break;
        }
        case ReportFormat::csv: {
            const auto path = out_dir / "costs.csv";
            auto out = open(path);
            out << "posture,component,cost_gbp,cost_mgbp\n";
            for (const auto& r : report.postures) {
                const std::string p = scenarios::posture_name(r.posture);
                out << fmt::format("{},investment,{},{:.6f}\n", p, r.invest_cost,
                                   r.invest_cost / 1e6);
                out << fmt::format("{},operational,{},{:.6f}\n", p,
                                   r.operating_cost, r.operating_cost / 1e6);
                out << fmt::format("{},total,{},{:.6f}\n", p, r.total_cost,
                                   r.total_cost / 1e6);
            }
            written.push_back(path);
            break;
        }
        case ReportFormat::plotdata: {
            const auto path = out_dir / "plotdata.csv";
            auto out = open(path);
            out << "posture,invest_mgbp,operational_mgbp,total_mgbp\n";
            for (const auto& r : report.postures) {
                out << fmt::format("{},{:.6f},{:.6f},{:.6f}\n",
                                   scenarios::posture_name(r.posture),
                                   r.invest_cost / 1e6, r.operating_cost / 1e6,
                                   r.total_cost / 1e6);
            }
            written.push_back(path);
            break;
        }
    }
    return written;
}

SweepResult sweep(const RunConfig& config, std::vector<int> k_list) {
    if (k_list.empty()) throw std::invalid_argument("sweep: empty k list");
    std::sort(k_list.begin(), k_list.end());
    const auto dup = std::unique(k_list.begin(), k_list.end());
    if (dup != k_list.end()) {
        std::cerr << "warning: duplicate k values in sweep list, deduplicated\n";
        k_list.erase(dup, k_list.end());
    }

    SweepResult result;
    for (int k : k_list) {
        RunConfig rc = config;
        rc.k_days = k;
        rc.out_dir.clear();  // only the sweep summary goes to disk
        result.reports.push_back(run(rc));
    }

    for (Posture p : {Posture::best, Posture::nominal, Posture::worst}) {
        const std::string name = scenarios::posture_name(p);
        std::vector<std::pair<int, std::string>> plans;
        for (std::size_t i = 0; i < result.reports.size(); ++i) {
            if (const auto* r = result.reports[i].find(p))
                plans.emplace_back(k_list[i], plan_signature(r->built));
        }
        if (plans.empty()) continue;
        int stable = plans.back().first;
        for (auto it = plans.rbegin() + 1; it != plans.rend(); ++it) {
            if (it->second != plans.back().second) break;
            stable = it->first;
        }
        result.stable_from_k[name] = stable;
    }

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        write_sweep_csv(result, config.out_dir / "sweep.csv");
        for (const auto& rep : result.reports) {
            const auto dir = config.out_dir / fmt::format("k{}", rep.k_days);
            emit_report(rep, ReportFormat::json, dir);
            emit_report(rep, ReportFormat::csv, dir);
            emit_report(rep, ReportFormat::plotdata, dir);
        }
    }
    return result;
}

void write_sweep_csv(const SweepResult& result,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw milp::IoError("cannot open " + path.string() + " for writing");
    out << "k,posture,invest_mgbp,operational_mgbp,total_mgbp,plan,stable\n";
    for (const auto& rep : result.reports) {
        for (const auto& r : rep.postures) {
            const std::string pname = scenarios::posture_name(r.posture);
            const auto it = result.stable_from_k.find(pname);
            const bool stable =
                it != result.stable_from_k.end() && rep.k_days >= it->second;
            out << fmt::format("{},{},{:.6f},{:.6f},{:.6f},{},{}\n", rep.k_days,
                               pname, r.invest_cost / 1e6, r.operating_cost / 1e6,
                               r.total_cost / 1e6, plan_signature(r.built),
                               stable ? 1 : 0);
        }
    }
}

}  // namespace mgplan::report
