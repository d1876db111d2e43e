// Independent oracles used by the unit and acceptance suites. These stay
// deliberately simple: exhaustive enumeration with an LP dispatch per
// binary assignment, warm-started along the enumeration order.

#ifndef MGPLAN_TESTS_SUPPORT_ORACLES_HPP
#define MGPLAN_TESTS_SUPPORT_ORACLES_HPP

#include <vector>

#include "mgplan/milp_model.hpp"
#include "mgplan/simplex.hpp"

namespace testsupport {

struct EnumerationResult {
    bool feasible = false;
    double objective = 0.0;
    unsigned long assignments = 0;
};

inline EnumerationResult enumerate_milp(const mgplan::milp::MilpModel& m) {
    using namespace mgplan::solver;
    std::vector<int> binaries;
    for (int j = 0; j < m.num_variables(); ++j)
        if (m.variables()[j].kind == mgplan::milp::VarKind::binary)
            binaries.push_back(j);
    SimplexSolver lp(m);
    EnumerationResult best;
    Basis last_basis;
    for (unsigned long mask = 0; mask < (1ul << binaries.size()); ++mask) {
        std::vector<BoundOverride> fix;
        fix.reserve(binaries.size());
        for (std::size_t b = 0; b < binaries.size(); ++b) {
            const double v = (mask >> b) & 1ul ? 1.0 : 0.0;
            fix.push_back({binaries[b], v, v});
        }
        const auto sol = lp.solve(fix, last_basis.empty() ? nullptr : &last_basis);
        last_basis = sol.basis;
        ++best.assignments;
        if (sol.status != LpStatus::optimal) continue;
        if (!best.feasible || sol.objective < best.objective) {
            best.feasible = true;
            best.objective = sol.objective;
        }
    }
    return best;
}

}  // namespace testsupport

#endif
