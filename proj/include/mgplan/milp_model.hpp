// Solver-agnostic MILP container: named variables with bounds, linear
// constraints, and a linear minimization objective. Column order is part of
// the model contract (branching and MPS export follow it).

#ifndef MGPLAN_MILP_MODEL_HPP
#define MGPLAN_MILP_MODEL_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mgplan::milp {

struct FormulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class VarKind { continuous, binary };
enum class RowSense { le, eq, ge };

struct Variable {
    std::string name;
    VarKind kind = VarKind::continuous;
    double lower = 0.0;
    double upper = 0.0;
};

struct Term {
    int col = 0;
    double coef = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    RowSense sense = RowSense::eq;
    double rhs = 0.0;
};

class MilpModel {
  public:
    explicit MilpModel(std::string name = "model") : name_(std::move(name)) {}

    /// Adds a column; names must be unique and lower <= upper.
    int add_variable(const std::string& name, VarKind kind, double lower,
                     double upper);
    /// Adds a row; zero-coefficient terms are dropped, columns must exist
    /// and may appear at most once per row.
    int add_constraint(const std::string& name, std::vector<Term> terms,
                       RowSense sense, double rhs);
    /// Accumulates onto the objective coefficient of a column.
    void add_objective_term(int col, double coef);
    void add_objective_constant(double value) { objective_constant_ += value; }

    const std::string& name() const { return name_; }
    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const std::vector<double>& objective() const { return objective_; }
    double objective_constant() const { return objective_constant_; }

    int num_variables() const { return static_cast<int>(variables_.size()); }
    int num_constraints() const { return static_cast<int>(constraints_.size()); }
    int num_binaries() const { return num_binaries_; }

    /// Column index for a variable name, or -1.
    int column(const std::string& name) const;

    double objective_value(std::span<const double> x) const;
    double row_activity(int row, std::span<const double> x) const;
    /// Largest violation of any row or bound at x (0 when feasible).
    double max_violation(std::span<const double> x) const;

  private:
    std::string name_;
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    std::vector<double> objective_;  // dense, one coefficient per column
    double objective_constant_ = 0.0;
    int num_binaries_ = 0;
    std::unordered_map<std::string, int> var_index_;
    std::unordered_map<std::string, int> row_index_;
};

}  // namespace mgplan::milp

#endif
