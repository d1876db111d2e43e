#include "mgplan/branch_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include <fmt/format.h>

#include "mgplan/mps_io.hpp"

namespace mgplan::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double frac_distance(double v) {
    return std::abs(v - std::round(v));
}

struct Node {
    double bound = -kInf;
    long id = 0;
    std::vector<BoundOverride> fixings;
    Basis basis;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
        return a.id > b.id;                                 // FIFO tie-break
    }
};

std::vector<int> binary_columns(const milp::MilpModel& model) {
    std::vector<int> cols;
    for (int j = 0; j < model.num_variables(); ++j)
        if (model.variables()[j].kind == milp::VarKind::binary) cols.push_back(j);
    return cols;
}

// most fractional first, ties to the lowest column
int most_fractional(const std::vector<int>& cols, const std::vector<double>& x,
                    double int_tol) {
    int best = -1;
    double best_frac = int_tol;
    for (int j : cols) {
        const double f = frac_distance(x[j]);
        if (f > best_frac) {
            best_frac = f;
            best = j;
        }
    }
    return best;
}

// priority columns are branched while any of them is fractional
int pick_branch_column(const std::vector<int>& binaries,
                       const std::vector<int>& priority,
                       const std::vector<double>& x, double int_tol) {
    const int preferred = most_fractional(priority, x, int_tol);
    if (preferred >= 0) return preferred;
    return most_fractional(binaries, x, int_tol);
}

}  // namespace

std::string milp_status_name(MilpStatus s) {
    switch (s) {
        case MilpStatus::optimal: return "optimal";
        case MilpStatus::infeasible: return "infeasible";
        case MilpStatus::gap_limit: return "gap_limit";
        case MilpStatus::node_limit: return "node_limit";
    }
    return "?";
}

double BnbResult::gap() const {
    if (!incumbent) return kInf;
    return std::abs(incumbent->objective - best_bound) /
           std::max(1.0, std::abs(incumbent->objective));
}

WarmStart warm_start(const milp::MilpModel& model, const std::vector<double>& values,
                     double feas_tol, double int_tol) {
    if (static_cast<int>(values.size()) != model.num_variables())
        throw InfeasibleIncumbent("warm start has wrong dimension");
    const double viol = model.max_violation(values);
    if (viol > feas_tol)
        throw InfeasibleIncumbent(
            fmt::format("warm start violates constraints by {}", viol));
    for (int j : binary_columns(model)) {
        if (frac_distance(values[j]) > int_tol)
            throw InfeasibleIncumbent(
                fmt::format("warm start is fractional in column {} ({})",
                            model.variables()[j].name, values[j]));
    }
    return {model.objective_value(values), values};
}

BnbResult solve_milp(const milp::MilpModel& model, const MilpOptions& options,
                     const WarmStart* seed) {
    const auto t_start = std::chrono::steady_clock::now();
    auto out_of_time = [&]() {
        if (options.time_limit_s <= 0.0) return false;
        const std::chrono::duration<double> dt =
            std::chrono::steady_clock::now() - t_start;
        return dt.count() > options.time_limit_s;
    };

    const auto binaries = binary_columns(model);
    SimplexSolver lp(model, options.lp);

    BnbResult res;
    double inc_obj = kInf;
    if (seed) {
        res.incumbent = LpSolution{};
        res.incumbent->status = LpStatus::optimal;
        res.incumbent->objective = seed->objective;
        res.incumbent->values = seed->values;
        inc_obj = seed->objective;
    }
    auto cutoff = [&]() {
        return inc_obj - options.gap_tol * std::max(1.0, std::abs(inc_obj));
    };

    LpSolution root = lp.solve();
    res.explored_nodes = 1;
    if (root.status == LpStatus::unbounded)
        throw std::runtime_error("solve_milp: relaxation is unbounded");
    if (root.status == LpStatus::infeasible) {
        res.status = seed ? MilpStatus::optimal : MilpStatus::infeasible;
        res.best_bound = seed ? inc_obj : kInf;
        return res;
    }

    auto accept_incumbent = [&](const LpSolution& sol) {
        if (sol.objective < inc_obj) {
            inc_obj = sol.objective;
            res.incumbent = sol;
        }
    };

    if (pick_branch_column(binaries, options.priority_columns, root.values, options.int_tol) < 0) {
        accept_incumbent(root);
        res.status = MilpStatus::optimal;
        res.best_bound = root.objective;
        return res;
    }

    // Rounding heuristics: fix every binary at a rounding of a relaxation
    // solution and re-dispatch. The portfolio covers the usual failure
    // modes (ceil keeps supply-style binaries on, lower-bound fixing is
    // the conservative fallback).
    enum class Rounding { nearest, floor, ceil, lower };
    auto try_fixing = [&](const LpSolution& from, Rounding mode) {
        std::vector<BoundOverride> fix;
        fix.reserve(binaries.size());
        for (int j : binaries) {
            double v = 0.0;
            switch (mode) {
                case Rounding::nearest: v = std::round(from.values[j]); break;
                case Rounding::floor:
                    v = std::floor(from.values[j] + options.int_tol);
                    break;
                case Rounding::ceil:
                    v = std::ceil(from.values[j] - options.int_tol);
                    break;
                case Rounding::lower: v = model.variables()[j].lower; break;
            }
            fix.push_back({j, v, v});
        }
        LpSolution h = lp.solve(fix, &from.basis);
        if (h.status == LpStatus::optimal) accept_incumbent(h);
    };
    // Fractional diving: repeatedly fix the binary closest to an integer at
    // its rounding and re-dispatch, flipping once on infeasibility. Keeps
    // feasibility checks inside the LP, so network limits are respected
    // while the plan follows the relaxation.
    auto dive = [&](const LpSolution& from) {
        std::vector<BoundOverride> fix;
        LpSolution cur = from;
        const int max_steps = 2 * static_cast<int>(binaries.size()) + 4;
        for (int step = 0; step < max_steps; ++step) {
            int pick = -1;
            double best = 2.0;
            for (int j : binaries) {
                const double f = frac_distance(cur.values[j]);
                if (f <= options.int_tol) continue;
                if (f < best) {
                    best = f;
                    pick = j;
                }
            }
            if (pick < 0) {  // integral: re-check and record
                accept_incumbent(cur);
                return;
            }
            const double v = std::round(cur.values[pick]);
            fix.push_back({pick, v, v});
            LpSolution next = lp.solve(fix, &cur.basis);
            if (next.status != LpStatus::optimal) {
                fix.back() = {pick, 1.0 - v, 1.0 - v};
                next = lp.solve(fix, &cur.basis);
                if (next.status != LpStatus::optimal) return;  // abandon dive
            }
            cur = std::move(next);
        }
    };

    if (options.root_heuristic) {
        for (Rounding mode : {Rounding::nearest, Rounding::floor,
                              Rounding::ceil, Rounding::lower})
            try_fixing(root, mode);
        dive(root);
    }

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long next_id = 0;
    auto branch = [&](const Node& parent, const LpSolution& sol) {
        if (sol.objective >= cutoff()) return;  // cannot improve on the incumbent
        const int col = pick_branch_column(binaries, options.priority_columns, sol.values, options.int_tol);
        for (double v : {std::floor(sol.values[col]), std::ceil(sol.values[col])}) {
            Node child;
            child.bound = sol.objective;
            child.id = next_id++;
            child.fixings = parent.fixings;
            child.fixings.push_back({col, v, v});
            // bases are cheap relative to re-solving, but cap the memory
            if (open.size() < 20000) child.basis = sol.basis;
            open.push(std::move(child));
        }
    };

    branch(Node{}, root);

    bool hit_node_limit = false;
    bool hit_time_limit = false;
    bool pruned_rest = false;
    double pruned_bound = kInf;
    while (!open.empty()) {
        if (res.explored_nodes >= options.node_limit) {
            hit_node_limit = true;
            break;
        }
        if (out_of_time()) {
            hit_time_limit = true;
            break;
        }
        Node node = open.top();
        open.pop();
        if (node.bound >= cutoff()) {
            // best-bound order: every remaining node is at least as bad
            pruned_rest = true;
            pruned_bound = node.bound;
            while (!open.empty()) open.pop();
            break;
        }
        LpSolution sol = lp.solve(node.fixings,
                                  node.basis.empty() ? nullptr : &node.basis);
        res.explored_nodes++;
        if (sol.status != LpStatus::optimal) continue;  // infeasible subtree
        if (sol.objective >= cutoff()) continue;
        if (pick_branch_column(binaries, options.priority_columns, sol.values, options.int_tol) < 0) {
            accept_incumbent(sol);
        } else {
            // occasional in-tree rounding pass; deeper fixings make the
            // rounded plans increasingly feasible
            if (options.root_heuristic && res.explored_nodes % 64 == 0) {
                try_fixing(sol, Rounding::nearest);
                try_fixing(sol, Rounding::ceil);
            }
            branch(node, sol);
        }
    }

    if (hit_node_limit || hit_time_limit) {
        res.status = hit_node_limit ? MilpStatus::node_limit : MilpStatus::gap_limit;
        res.best_bound = open.empty() ? inc_obj : std::min(inc_obj, open.top().bound);
        return res;
    }
    if (!res.incumbent) {
        res.status = MilpStatus::infeasible;
        res.best_bound = kInf;
        return res;
    }
    res.status = MilpStatus::optimal;
    res.best_bound = pruned_rest ? std::min(pruned_bound, inc_obj) : inc_obj;
    return res;
}

BnbResult solve_with_external(const milp::MilpModel& model,
                              const ExternalSolverConfig& config) {
    namespace fs = std::filesystem;
    const auto stamp =
        std::chrono::steady_clock::now().time_since_epoch().count();
    const fs::path dir =
        fs::temp_directory_path() / fmt::format("mgplan-ext-{}", stamp);
    fs::create_directories(dir);
    const fs::path mps = dir / "model.mps";
    const fs::path sol = dir / "model.sol";
    milp::export_mps(model, mps);

    const std::string cmd =
        fmt::format("{} {} {}", config.command, mps.string(), sol.string());
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
        fs::remove_all(dir);
        throw std::runtime_error(
            fmt::format("external solver '{}' exited with {}", config.command, rc));
    }

    std::ifstream in(sol);
    if (!in) {
        fs::remove_all(dir);
        throw std::runtime_error("external solver wrote no solution file");
    }
    std::vector<double> values(model.num_variables(), 0.0);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == '*') continue;
        std::istringstream ls(line);
        std::string name;
        double value = 0.0;
        if (!(ls >> name >> value)) continue;
        const int col = model.column(name);
        if (col >= 0) values[col] = value;
    }
    fs::remove_all(dir);

    WarmStart ws = warm_start(model, values, config.feas_tol, config.int_tol);
    BnbResult res;
    res.status = MilpStatus::optimal;
    res.incumbent = LpSolution{};
    res.incumbent->status = LpStatus::optimal;
    res.incumbent->objective = ws.objective;
    res.incumbent->values = std::move(ws.values);
    res.best_bound = ws.objective;
    res.explored_nodes = 0;
    return res;
}

}  // namespace mgplan::solver
