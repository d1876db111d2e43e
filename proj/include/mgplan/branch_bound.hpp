// Exact MILP solving on top of the simplex: best-bound branch-and-bound
// over binary columns, with warm-started node LPs, a root rounding
// heuristic, and an optional hand-off to an external solver command.

#ifndef MGPLAN_BRANCH_BOUND_HPP
#define MGPLAN_BRANCH_BOUND_HPP

#include <optional>
#include <string>
#include <vector>

#include "mgplan/milp_model.hpp"
#include "mgplan/simplex.hpp"

namespace mgplan::solver {

struct InfeasibleIncumbent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MilpStatus { optimal, infeasible, gap_limit, node_limit };

std::string milp_status_name(MilpStatus s);

struct MilpOptions {
    double gap_tol = 1e-6;  // relative: |incumbent - bound| <= gap_tol*max(1,|incumbent|)
    double int_tol = 1e-6;
    long node_limit = 500000;
    double time_limit_s = 0.0;  // 0: no limit; exceeding it yields gap_limit
    bool root_heuristic = true;
    // columns branched before any other fractional binary (e.g. first-stage
    // investment decisions, whose fixing actually moves the bound)
    std::vector<int> priority_columns;
    LpOptions lp;
};

struct BnbResult {
    MilpStatus status = MilpStatus::optimal;
    std::optional<LpSolution> incumbent;
    double best_bound = 0.0;
    long explored_nodes = 0;

    double objective() const { return incumbent ? incumbent->objective : 0.0; }
    double gap() const;
};

/// Feasibility-checked starting incumbent for solve_milp.
struct WarmStart {
    double objective = 0.0;
    std::vector<double> values;
};

/// Validates a candidate solution (rows, bounds and integrality) and turns
/// it into a warm start; throws InfeasibleIncumbent otherwise.
WarmStart warm_start(const milp::MilpModel& model, const std::vector<double>& values,
                     double feas_tol = 1e-7, double int_tol = 1e-6);

/// Best-bound branch and bound, branching on the most fractional binary
/// (ties to the lowest column index). Deterministic for fixed options.
BnbResult solve_milp(const milp::MilpModel& model, const MilpOptions& options = {},
                     const WarmStart* seed = nullptr);

/// External hand-off: the command is run as `<command> <model.mps> <out.sol>`
/// and must write `name value` lines; missing columns read as 0. The parsed
/// solution is feasibility-checked and returned under the BnbResult
/// contract.
struct ExternalSolverConfig {
    std::string command;
    double feas_tol = 1e-6;
    double int_tol = 1e-6;
};

BnbResult solve_with_external(const milp::MilpModel& model,
                              const ExternalSolverConfig& config);

}  // namespace mgplan::solver

#endif
