#include "mgplan/milp_model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace mgplan::milp {

int MilpModel::add_variable(const std::string& name, VarKind kind,
                            double lower, double upper) {
    if (name.empty()) throw FormulationError("variable with empty name");
    if (!(lower <= upper))
        throw FormulationError(
            fmt::format("variable {}: lower {} > upper {}", name, lower, upper));
    if (!var_index_.emplace(name, num_variables()).second)
        throw FormulationError("duplicate variable name " + name);
    variables_.push_back({name, kind, lower, upper});
    objective_.push_back(0.0);
    if (kind == VarKind::binary) ++num_binaries_;
    return num_variables() - 1;
}

int MilpModel::add_constraint(const std::string& name, std::vector<Term> terms,
                              RowSense sense, double rhs) {
    if (name.empty()) throw FormulationError("constraint with empty name");
    if (!row_index_.emplace(name, num_constraints()).second)
        throw FormulationError("duplicate constraint name " + name);
    std::vector<Term> kept;
    kept.reserve(terms.size());
    for (const auto& t : terms) {
        if (t.col < 0 || t.col >= num_variables())
            throw FormulationError(
                fmt::format("constraint {}: unknown column {}", name, t.col));
        if (t.coef == 0.0) continue;
        for (const auto& seen : kept)
            if (seen.col == t.col)
                throw FormulationError(
                    fmt::format("constraint {}: duplicate column {}", name, t.col));
        kept.push_back(t);
    }
    constraints_.push_back({name, std::move(kept), sense, rhs});
    return num_constraints() - 1;
}

void MilpModel::add_objective_term(int col, double coef) {
    if (col < 0 || col >= num_variables())
        throw FormulationError(fmt::format("objective: unknown column {}", col));
    objective_[col] += coef;
}

int MilpModel::column(const std::string& name) const {
    auto it = var_index_.find(name);
    return it == var_index_.end() ? -1 : it->second;
}

double MilpModel::objective_value(std::span<const double> x) const {
    double v = objective_constant_;
    for (int j = 0; j < num_variables(); ++j) v += objective_[j] * x[j];
    return v;
}

double MilpModel::row_activity(int row, std::span<const double> x) const {
    double a = 0.0;
    for (const auto& t : constraints_[row].terms) a += t.coef * x[t.col];
    return a;
}

double MilpModel::max_violation(std::span<const double> x) const {
    double worst = 0.0;
    for (int j = 0; j < num_variables(); ++j) {
        worst = std::max(worst, variables_[j].lower - x[j]);
        worst = std::max(worst, x[j] - variables_[j].upper);
    }
    for (int r = 0; r < num_constraints(); ++r) {
        const double a = row_activity(r, x);
        const auto& c = constraints_[r];
        switch (c.sense) {
            case RowSense::le: worst = std::max(worst, a - c.rhs); break;
            case RowSense::ge: worst = std::max(worst, c.rhs - a); break;
            case RowSense::eq: worst = std::max(worst, std::abs(a - c.rhs)); break;
        }
    }
    return worst;
}

}  // namespace mgplan::milp
