#include "mgplan/simplex.hpp"
#include <cstdlib>

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace mgplan::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Product-form eta: the ftran image w = B^{-1} a_q of the column that
// entered at basis position `pos`, split into pivot and off-pivot entries.
struct Eta {
    int pos = 0;
    double pivot = 1.0;
    std::vector<std::pair<int, double>> nz;
};

struct RatioEvent {
    double t = 0.0;
    bool soft = false;   // passable phase-1 breakpoint of an infeasible basic
    bool self = false;   // entering variable reaching its opposite bound
    int pos = -1;        // basis position of the blocking variable
    double gain = 0.0;   // phase-1 slope increase when passing a soft event
    double wmag = 0.0;   // |pivot| for stability tie-breaks
    VarStatus leave_to = VarStatus::at_lower;
};

}  // namespace

struct SimplexSolver::Impl {
    // problem data (fixed after construction)
    int n = 0, m = 0, N = 0;
    std::vector<int> col_ptr, row_ind;
    std::vector<double> col_val;
    std::vector<double> b;
    std::vector<double> base_lo, base_hi;
    std::vector<double> cost;          // unscaled, structural + slack
    std::vector<double> scaled_cost;   // cost / cost_scale
    double cost_scale = 1.0;
    double obj_constant = 0.0;
    LpOptions opt;

    // per-solve state
    std::vector<double> lo, hi, x;
    std::vector<VarStatus> state;
    std::vector<int> basic;  // position -> column
    std::vector<int> pos;    // column -> position or -1
    std::vector<Eta> etas;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    int pivots_since_refactor = 0;
    int degen_streak = 0;
    bool bland = false;

    Eigen::VectorXd w_scratch, y_scratch, rhs_scratch, solve_tmp;

    explicit Impl(const milp::MilpModel& model, LpOptions options) : opt(options) {
        n = model.num_variables();
        m = model.num_constraints();
        N = n + m;
        b.resize(m);
        base_lo.resize(N);
        base_hi.resize(N);
        cost.assign(N, 0.0);
        obj_constant = model.objective_constant();

        for (int j = 0; j < n; ++j) {
            base_lo[j] = model.variables()[j].lower;
            base_hi[j] = model.variables()[j].upper;
            cost[j] = model.objective()[j];
        }
        // slack bounds encode the row sense: a.x + s = rhs
        for (int i = 0; i < m; ++i) {
            const auto& row = model.constraints()[i];
            b[i] = row.rhs;
            switch (row.sense) {
                case milp::RowSense::le:
                    base_lo[n + i] = 0.0;
                    base_hi[n + i] = kInf;
                    break;
                case milp::RowSense::ge:
                    base_lo[n + i] = -kInf;
                    base_hi[n + i] = 0.0;
                    break;
                case milp::RowSense::eq:
                    base_lo[n + i] = 0.0;
                    base_hi[n + i] = 0.0;
                    break;
            }
        }

        // structural matrix in CSC order
        std::vector<int> counts(n, 0);
        for (const auto& row : model.constraints())
            for (const auto& t : row.terms) counts[t.col]++;
        col_ptr.assign(n + 1, 0);
        for (int j = 0; j < n; ++j) col_ptr[j + 1] = col_ptr[j] + counts[j];
        row_ind.resize(col_ptr[n]);
        col_val.resize(col_ptr[n]);
        std::vector<int> fill(col_ptr.begin(), col_ptr.end() - 1);
        for (int i = 0; i < m; ++i)
            for (const auto& t : model.constraints()[i].terms) {
                row_ind[fill[t.col]] = i;
                col_val[fill[t.col]] = t.coef;
                ++fill[t.col];
            }

        cost_scale = 1.0;
        for (int j = 0; j < N; ++j)
            cost_scale = std::max(cost_scale, std::abs(cost[j]));
        scaled_cost.resize(N);
        for (int j = 0; j < N; ++j) scaled_cost[j] = cost[j] / cost_scale;

        if (opt.max_iter <= 0) opt.max_iter = 2000 + 50 * (N + m);
        w_scratch.resize(m);
        y_scratch.resize(m);
        rhs_scratch.resize(m);
    }

    // --- basis linear algebra -------------------------------------------

    bool refactor() {
        etas.clear();
        pivots_since_refactor = 0;
        if (m == 0) return true;
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(m) * 4);
        for (int k = 0; k < m; ++k) {
            const int j = basic[k];
            if (j >= n) {
                trips.emplace_back(j - n, k, 1.0);
            } else {
                for (int e = col_ptr[j]; e < col_ptr[j + 1]; ++e)
                    trips.emplace_back(row_ind[e], k, col_val[e]);
            }
        }
        Eigen::SparseMatrix<double> B(m, m);
        B.setFromTriplets(trips.begin(), trips.end());
        lu.compute(B);
        return lu.info() == Eigen::Success;
    }

    // w <- B^{-1} w (row-indexed input, position-indexed output)
    void ftran(Eigen::VectorXd& w) {
        if (m == 0) return;
        solve_tmp = lu.solve(w);
        w.swap(solve_tmp);
        for (const auto& eta : etas) {
            const double piv = w[eta.pos] / eta.pivot;
            w[eta.pos] = piv;
            if (piv != 0.0)
                for (const auto& [i, v] : eta.nz) w[i] -= v * piv;
        }
    }

    // y <- B^{-T} y (position-indexed input, row-indexed output)
    void btran(Eigen::VectorXd& y) {
        if (m == 0) return;
        for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
            double s = y[it->pos];
            for (const auto& [i, v] : it->nz) s -= v * y[i];
            y[it->pos] = s / it->pivot;
        }
        solve_tmp = lu.adjoint().solve(y);
        y.swap(solve_tmp);
    }

    double column_dot(int j, const Eigen::VectorXd& y) const {
        if (j >= n) return y[j - n];
        double s = 0.0;
        for (int e = col_ptr[j]; e < col_ptr[j + 1]; ++e)
            s += col_val[e] * y[row_ind[e]];
        return s;
    }

    void load_column(int j, Eigen::VectorXd& w) const {
        w.setZero();
        if (j >= n) {
            w[j - n] = 1.0;
        } else {
            for (int e = col_ptr[j]; e < col_ptr[j + 1]; ++e)
                w[row_ind[e]] = col_val[e];
        }
    }

    double nonbasic_value(int j) const {
        switch (state[j]) {
            case VarStatus::at_lower: return lo[j];
            case VarStatus::at_upper: return hi[j];
            default: return 0.0;
        }
    }

    // Recomputes every basic value from the fresh factorization; etas must
    // be empty.
    void recompute_x() {
        for (int j = 0; j < N; ++j)
            if (state[j] != VarStatus::basic) x[j] = nonbasic_value(j);
        if (m == 0) return;
        for (int i = 0; i < m; ++i) rhs_scratch[i] = b[i];
        for (int j = 0; j < N; ++j) {
            if (state[j] == VarStatus::basic || x[j] == 0.0) continue;
            if (j >= n) {
                rhs_scratch[j - n] -= x[j];
            } else {
                for (int e = col_ptr[j]; e < col_ptr[j + 1]; ++e)
                    rhs_scratch[row_ind[e]] -= col_val[e] * x[j];
            }
        }
        Eigen::VectorXd xb = lu.solve(rhs_scratch);
        for (int k = 0; k < m; ++k) x[basic[k]] = xb[k];
    }

    // One iterative-refinement pass on the basic values.
    void refine_x() {
        if (m == 0) return;
        for (int i = 0; i < m; ++i) rhs_scratch[i] = b[i];
        for (int j = 0; j < N; ++j) {
            if (x[j] == 0.0) continue;
            if (j >= n) {
                rhs_scratch[j - n] -= x[j];
            } else {
                for (int e = col_ptr[j]; e < col_ptr[j + 1]; ++e)
                    rhs_scratch[row_ind[e]] -= col_val[e] * x[j];
            }
        }
        Eigen::VectorXd dx = lu.solve(rhs_scratch);
        for (int k = 0; k < m; ++k) x[basic[k]] += dx[k];
    }

    // --- solve driver ----------------------------------------------------

    void normalize_nonbasic(int j) {
        if (state[j] == VarStatus::basic) return;
        if (lo[j] == -kInf && hi[j] == kInf) {
            state[j] = VarStatus::free_zero;
        } else if (state[j] == VarStatus::at_lower && lo[j] == -kInf) {
            state[j] = VarStatus::at_upper;
        } else if (state[j] == VarStatus::at_upper && hi[j] == kInf) {
            state[j] = VarStatus::at_lower;
        } else if (state[j] == VarStatus::free_zero) {
            state[j] = std::abs(lo[j]) <= std::abs(hi[j]) && lo[j] != -kInf
                           ? VarStatus::at_lower
                           : VarStatus::at_upper;
            if (state[j] == VarStatus::at_upper && hi[j] == kInf)
                state[j] = VarStatus::at_lower;
        }
    }

    void slack_basis() {
        state.assign(N, VarStatus::at_lower);
        pos.assign(N, -1);
        basic.resize(m);
        for (int j = 0; j < n; ++j) {
            if (lo[j] == -kInf && hi[j] == kInf) {
                state[j] = VarStatus::free_zero;
            } else if (lo[j] == -kInf) {
                state[j] = VarStatus::at_upper;
            } else if (hi[j] != kInf &&
                       std::abs(hi[j]) < std::abs(lo[j])) {
                state[j] = VarStatus::at_upper;
            }
        }
        for (int i = 0; i < m; ++i) {
            basic[i] = n + i;
            state[n + i] = VarStatus::basic;
            pos[n + i] = i;
        }
    }

    bool adopt_warm(const Basis& warm) {
        if (static_cast<int>(warm.state.size()) != N ||
            static_cast<int>(warm.basic_cols.size()) != m)
            return false;
        state = warm.state;
        basic = warm.basic_cols;
        pos.assign(N, -1);
        for (int k = 0; k < m; ++k) {
            const int j = basic[k];
            if (j < 0 || j >= N || pos[j] >= 0) return false;
            if (state[j] != VarStatus::basic) return false;
            pos[j] = k;
        }
        int basics = 0;
        for (int j = 0; j < N; ++j) {
            if (state[j] == VarStatus::basic) {
                ++basics;
                if (pos[j] < 0) return false;
            } else {
                normalize_nonbasic(j);
            }
        }
        return basics == m;
    }

    double infeasibility_sum() const {
        double s = 0.0;
        for (int k = 0; k < m; ++k) {
            const int j = basic[k];
            s += std::max(0.0, lo[j] - x[j]);
            s += std::max(0.0, x[j] - hi[j]);
        }
        return s;
    }

    LpSolution run(std::span<const BoundOverride> overrides, const Basis* warm) {
        lo = base_lo;
        hi = base_hi;
        for (const auto& ov : overrides) {
            if (ov.col < 0 || ov.col >= n)
                throw std::invalid_argument("bound override on unknown column");
            lo[ov.col] = ov.lower;
            hi[ov.col] = ov.upper;
        }

        x.assign(N, 0.0);
        if (!(warm && adopt_warm(*warm))) slack_basis();
        if (!refactor()) {
            // a singular warm basis is replaced wholesale
            slack_basis();
            if (!refactor())
                throw std::runtime_error("simplex: slack basis refactorization failed");
        }
        recompute_x();
        degen_streak = 0;
        bland = false;

        LpSolution sol;
        Eigen::VectorXd& y = y_scratch;
        Eigen::VectorXd& w = w_scratch;

        const bool trace = std::getenv("MGPLAN_SIMPLEX_TRACE") != nullptr;
        for (int iter = 0;; ++iter) {
            if (iter >= opt.max_iter)
                throw IterationLimit("simplex: iteration limit reached");
            sol.iterations = iter + 1;

            const bool phase1 = infeasibility_sum() > opt.feas_tol;
            if (trace && iter >= 3000 && iter < 3040) {
                double obj = 0.0;
                for (int j = 0; j < N; ++j) obj += cost[j] * x[j];
                std::fprintf(stderr, "it=%d ph%d infeas=%.3e obj=%.10e bland=%d degen=%d\n",
                             iter, phase1 ? 1 : 2, infeasibility_sum(), obj, bland ? 1 : 0,
                             degen_streak);
            }

            // dual direction for the current (possibly phase-1) costs
            y.setZero();
            for (int k = 0; k < m; ++k) {
                const int j = basic[k];
                if (phase1) {
                    if (x[j] > hi[j] + opt.feas_tol)
                        y[k] = 1.0;
                    else if (x[j] < lo[j] - opt.feas_tol)
                        y[k] = -1.0;
                } else {
                    y[k] = scaled_cost[j];
                }
            }
            btran(y);

            // pricing
            int enter = -1;
            int sigma = 1;
            double best_score = opt.dual_tol;
            double enter_d = 0.0;
            for (int j = 0; j < N; ++j) {
                if (state[j] == VarStatus::basic) continue;
                if (lo[j] == hi[j]) continue;  // fixed
                const double cj = phase1 ? 0.0 : scaled_cost[j];
                const double d = cj - column_dot(j, y);
                int dir = 0;
                if (state[j] == VarStatus::at_lower && d < -best_score)
                    dir = 1;
                else if (state[j] == VarStatus::at_upper && d > best_score)
                    dir = -1;
                else if (state[j] == VarStatus::free_zero &&
                         std::abs(d) > best_score)
                    dir = d < 0.0 ? 1 : -1;
                if (dir == 0) continue;
                enter = j;
                sigma = dir;
                enter_d = d;
                if (bland) break;  // lowest improving index
                best_score = std::abs(d);
            }

            if (enter < 0) {
                if (phase1) return finalize_infeasible(sol, y);
                return finalize_optimal(sol);
            }

            load_column(enter, w);
            ftran(w);

            // ratio test
            std::vector<RatioEvent> events;
            events.reserve(16);
            for (int k = 0; k < m; ++k) {
                const double wk = w[k];
                if (std::abs(wk) <= opt.pivot_tol) continue;
                const int j = basic[k];
                const double rate = sigma * wk;  // x_B[k] decreases at `rate`
                const double xj = x[j];
                const bool below = xj < lo[j] - opt.feas_tol;
                const bool above = xj > hi[j] + opt.feas_tol;
                auto push = [&](double t, bool soft, VarStatus to) {
                    events.push_back({std::max(0.0, t), soft, false, k,
                                      std::abs(rate), std::abs(wk), to});
                };
                if (below) {
                    if (rate < 0.0) {
                        push((lo[j] - xj) / -rate, true, VarStatus::at_lower);
                        if (hi[j] != kInf)
                            push((hi[j] - xj) / -rate, false, VarStatus::at_upper);
                    }
                } else if (above) {
                    if (rate > 0.0) {
                        push((xj - hi[j]) / rate, true, VarStatus::at_upper);
                        if (lo[j] != -kInf)
                            push((xj - lo[j]) / rate, false, VarStatus::at_lower);
                    }
                } else if (rate > 0.0) {
                    if (lo[j] != -kInf)
                        push((xj - lo[j]) / rate, false, VarStatus::at_lower);
                } else if (rate < 0.0) {
                    if (hi[j] != kInf)
                        push((hi[j] - xj) / -rate, false, VarStatus::at_upper);
                }
            }
            if (lo[enter] != -kInf && hi[enter] != kInf) {
                RatioEvent self;
                self.t = hi[enter] - lo[enter];
                self.self = true;
                events.push_back(self);
            }

            if (events.empty()) {
                if (phase1)
                    throw std::runtime_error(
                        "simplex: unbounded phase-1 direction (numerical failure)");
                return finalize_unbounded(sol);
            }

            std::sort(events.begin(), events.end(),
                      [this](const RatioEvent& a, const RatioEvent& b) {
                          if (a.t != b.t) return a.t < b.t;
                          if (a.soft != b.soft) return !a.soft;  // hard first
                          if (bland) {
                              const int ja = a.self ? N : basic[a.pos];
                              const int jb = b.self ? N : basic[b.pos];
                              return ja < jb;
                          }
                          return a.wmag > b.wmag;
                      });

            const RatioEvent* stop = nullptr;
            if (phase1 && !bland) {
                // long step: keep passing soft breakpoints while the
                // infeasibility still decreases
                double slope = -std::abs(enter_d);
                for (const auto& ev : events) {
                    if (!ev.soft) {
                        stop = &ev;
                        break;
                    }
                    slope += ev.gain;
                    if (slope >= -1e-12) {
                        stop = &ev;
                        break;
                    }
                }
                if (!stop) stop = &events.back();
            } else {
                stop = &events.front();
            }

            const double step = std::max(0.0, stop->t);
            if (trace && iter >= 3000 && iter < 3040) {
                std::fprintf(stderr,
                             "   enter=%d sigma=%d d=%.3e step=%.3e %s leave=%d\n",
                             enter, sigma, enter_d, step,
                             stop->self ? "flip" : (stop->soft ? "soft" : "hard"),
                             stop->self ? -1 : basic[stop->pos]);
            }

            // apply the move
            if (step != 0.0) {
                x[enter] += sigma * step;
                for (int k = 0; k < m; ++k)
                    if (w[k] != 0.0) x[basic[k]] -= sigma * step * w[k];
            }
            if (step <= 1e-10) {
                if (++degen_streak > 400) bland = true;
            } else {
                degen_streak = 0;
                bland = false;
            }

            if (stop->self) {
                // bound flip, basis unchanged
                state[enter] = sigma > 0 ? VarStatus::at_upper : VarStatus::at_lower;
                x[enter] = nonbasic_value(enter);
                continue;
            }

            const int r = stop->pos;
            const int leave = basic[r];
            state[leave] = stop->leave_to;
            pos[leave] = -1;
            x[leave] = nonbasic_value(leave);
            state[enter] = VarStatus::basic;
            basic[r] = enter;
            pos[enter] = r;

            Eta eta;
            eta.pos = r;
            eta.pivot = w[r];
            for (int k = 0; k < m; ++k)
                if (k != r && std::abs(w[k]) > 1e-14)
                    eta.nz.emplace_back(k, w[k]);
            etas.push_back(std::move(eta));

            if (++pivots_since_refactor >= opt.refactor_every) {
                if (!refactor()) repair_basis();
                recompute_x();
            }
        }
    }

    void repair_basis() {
        // last resort when a numerically singular basis shows up
        slack_basis();
        if (!refactor())
            throw std::runtime_error("simplex: basis repair failed");
    }

    void fill_primal(LpSolution& sol) const {
        sol.values.assign(x.begin(), x.begin() + n);
        sol.basis.state = state;
        sol.basis.basic_cols = basic;
    }

    LpSolution finalize_optimal(LpSolution& sol) {
        if (!refactor())
            throw std::runtime_error("simplex: final basis numerically singular");
        recompute_x();
        refine_x();

        sol.status = LpStatus::optimal;
        fill_primal(sol);
        double obj = obj_constant;
        for (int j = 0; j < N; ++j) obj += cost[j] * x[j];
        sol.objective = obj;

        Eigen::VectorXd& y = y_scratch;
        y.setZero();
        for (int k = 0; k < m; ++k) y[k] = cost[basic[k]];
        btran(y);
        sol.duals.assign(y.data(), y.data() + m);
        sol.reduced_costs.resize(n);
        double dual_obj = obj_constant;
        for (int i = 0; i < m; ++i) dual_obj += y[i] * b[i];
        for (int j = 0; j < N; ++j) {
            const double d = cost[j] - column_dot(j, y);
            if (j < n) sol.reduced_costs[j] = d;
            if (state[j] != VarStatus::basic) dual_obj += d * x[j];
        }
        sol.dual_objective = dual_obj;
        return sol;
    }

    LpSolution finalize_infeasible(LpSolution& sol, const Eigen::VectorXd& y) {
        sol.status = LpStatus::infeasible;
        fill_primal(sol);
        sol.infeasibility = infeasibility_sum();
        sol.duals.assign(y.data(), y.data() + m);
        sol.objective = kInf;
        sol.dual_objective = kInf;
        return sol;
    }

    LpSolution finalize_unbounded(LpSolution& sol) {
        sol.status = LpStatus::unbounded;
        fill_primal(sol);
        sol.objective = -kInf;
        sol.dual_objective = -kInf;
        return sol;
    }
};

SimplexSolver::SimplexSolver(const milp::MilpModel& model, LpOptions options)
    : impl_(std::make_unique<Impl>(model, options)) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

LpSolution SimplexSolver::solve(std::span<const BoundOverride> overrides,
                                const Basis* warm) {
    return impl_->run(overrides, warm);
}

int SimplexSolver::structural_columns() const { return impl_->n; }
int SimplexSolver::rows() const { return impl_->m; }

LpSolution solve_lp(const milp::MilpModel& model, double feas_tol, int max_iter) {
    LpOptions opt;
    opt.feas_tol = feas_tol;
    opt.max_iter = max_iter;
    SimplexSolver solver(model, opt);
    return solver.solve();
}

}  // namespace mgplan::solver
