#include <doctest.h>

#include "mgplan/milp_model.hpp"

using namespace mgplan::milp;

TEST_SUITE("milp_model") {

TEST_CASE("variables and constraints are indexed by name") {
    MilpModel m("t");
    const int x = m.add_variable("x", VarKind::continuous, 0.0, 10.0);
    const int z = m.add_variable("z", VarKind::binary, 0.0, 1.0);
    CHECK(m.column("x") == x);
    CHECK(m.column("z") == z);
    CHECK(m.column("nope") == -1);
    CHECK(m.num_binaries() == 1);
}

TEST_CASE("duplicate names and bad bounds are rejected") {
    MilpModel m("t");
    m.add_variable("x", VarKind::continuous, 0.0, 1.0);
    CHECK_THROWS_AS(m.add_variable("x", VarKind::continuous, 0.0, 1.0),
                    FormulationError);
    CHECK_THROWS_AS(m.add_variable("y", VarKind::continuous, 2.0, 1.0),
                    FormulationError);
}

TEST_CASE("constraints must reference existing columns once") {
    MilpModel m("t");
    const int x = m.add_variable("x", VarKind::continuous, 0.0, 1.0);
    CHECK_THROWS_AS(m.add_constraint("bad", {{x + 5, 1.0}}, RowSense::le, 0.0),
                    FormulationError);
    CHECK_THROWS_AS(
        m.add_constraint("dup", {{x, 1.0}, {x, 2.0}}, RowSense::le, 0.0),
        FormulationError);
    m.add_constraint("ok", {{x, 1.0}}, RowSense::le, 5.0);
    CHECK_THROWS_AS(m.add_constraint("ok", {{x, 1.0}}, RowSense::le, 5.0),
                    FormulationError);
}

TEST_CASE("zero coefficients are dropped from rows") {
    MilpModel m("t");
    const int x = m.add_variable("x", VarKind::continuous, 0.0, 1.0);
    const int y = m.add_variable("y", VarKind::continuous, 0.0, 1.0);
    const int r = m.add_constraint("r", {{x, 0.0}, {y, 2.0}}, RowSense::eq, 1.0);
    CHECK(m.constraints()[r].terms.size() == 1);
}

TEST_CASE("objective evaluation and violation measurement") {
    MilpModel m("t");
    const int x = m.add_variable("x", VarKind::continuous, 0.0, 2.0);
    const int y = m.add_variable("y", VarKind::continuous, 0.0, 2.0);
    m.add_objective_term(x, 3.0);
    m.add_objective_term(y, -1.0);
    m.add_objective_constant(10.0);
    m.add_constraint("cap", {{x, 1.0}, {y, 1.0}}, RowSense::le, 2.5);

    const std::vector<double> ok{1.0, 1.0};
    CHECK(m.objective_value(ok) == doctest::Approx(12.0));
    CHECK(m.max_violation(ok) == doctest::Approx(0.0));

    const std::vector<double> bad{2.0, 1.5};
    CHECK(m.max_violation(bad) == doctest::Approx(1.0));  // row exceeded by 1

    const std::vector<double> out_of_bounds{-0.5, 0.0};
    CHECK(m.max_violation(out_of_bounds) == doctest::Approx(0.5));
}

}  // TEST_SUITE
