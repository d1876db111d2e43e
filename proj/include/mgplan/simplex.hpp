// Bounded-variable primal simplex over MilpModel rows (integrality relaxed).
// Slack columns turn every row into an equality; the basis inverse is kept
// as a periodically refactorized sparse LU plus a product-form eta file.
// Phase 1 minimizes total bound violation with a composite (long-step)
// ratio test, which lets a solve warm-start from any basis. Dantzig pricing
// with a switch to Bland's rule after a degeneracy stall guarantees
// termination.

#ifndef MGPLAN_SIMPLEX_HPP
#define MGPLAN_SIMPLEX_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "mgplan/milp_model.hpp"

namespace mgplan::solver {

struct IterationLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LpStatus { optimal, infeasible, unbounded };

enum class VarStatus : std::uint8_t { basic, at_lower, at_upper, free_zero };

/// Basis snapshot usable to warm-start another solve of a model with the
/// same shape (e.g. after branching bound changes).
struct Basis {
    std::vector<VarStatus> state;  // structural columns then slacks
    std::vector<int> basic_cols;   // one column per row
    bool empty() const { return basic_cols.empty(); }
};

struct LpSolution {
    LpStatus status = LpStatus::optimal;
    double objective = 0.0;            // includes the model constant
    std::vector<double> values;        // structural columns, model order
    std::vector<double> duals;         // per row; Farkas-like when infeasible
    std::vector<double> reduced_costs;  // structural columns
    double dual_objective = 0.0;       // matches objective at an optimum
    int iterations = 0;
    double infeasibility = 0.0;  // residual phase-1 objective when infeasible
    Basis basis;
};

struct BoundOverride {
    int col = 0;
    double lower = 0.0;
    double upper = 0.0;
};

struct LpOptions {
    double feas_tol = 1e-7;   // primal bound tolerance
    double dual_tol = 1e-9;   // pricing threshold on unit-scaled costs
    double pivot_tol = 1e-9;  // smallest acceptable pivot magnitude
    int refactor_every = 100;  // pivots between basis refactorizations
    int max_iter = 0;          // 0: derived from the model size
};

/// One reusable solve context per model: the constraint matrix is converted
/// once and subsequent solves only change bounds (and optionally start from
/// a previous basis). Instances are single-threaded.
class SimplexSolver {
  public:
    explicit SimplexSolver(const milp::MilpModel& model, LpOptions options = {});
    ~SimplexSolver();
    SimplexSolver(SimplexSolver&&) noexcept;
    SimplexSolver& operator=(SimplexSolver&&) noexcept;

    LpSolution solve(std::span<const BoundOverride> overrides = {},
                     const Basis* warm = nullptr);

    int structural_columns() const;
    int rows() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Single-shot convenience wrapper around SimplexSolver.
LpSolution solve_lp(const milp::MilpModel& model, double feas_tol = 1e-7,
                    int max_iter = 0);

}  // namespace mgplan::solver

#endif
