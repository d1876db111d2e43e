#include <doctest.h>

#include <cmath>
#include <random>

#include "mgplan/milp_model.hpp"
#include "mgplan/simplex.hpp"
#include "support/test_cases.hpp"

using namespace mgplan::milp;
using namespace mgplan::solver;

namespace {

MilpModel knapsack_relaxation() {
    // min -3a - 2b  s.t. a + b <= 1, binaries relaxed
    MilpModel m("knap");
    const int a = m.add_variable("a", VarKind::binary, 0.0, 1.0);
    const int b = m.add_variable("b", VarKind::binary, 0.0, 1.0);
    m.add_objective_term(a, -3.0);
    m.add_objective_term(b, -2.0);
    m.add_constraint("cap", {{a, 1.0}, {b, 1.0}}, RowSense::le, 1.0);
    return m;
}

// Random dense-ish LP with bounded columns; always bounded.
MilpModel random_lp(std::mt19937_64& gen, int rows, int cols) {
    MilpModel m("rand");
    for (int j = 0; j < cols; ++j) {
        const double lo = testsupport::uniform(gen, -5.0, 0.0);
        const double hi = lo + testsupport::uniform(gen, 0.5, 8.0);
        m.add_variable("x" + std::to_string(j), VarKind::continuous, lo, hi);
        m.add_objective_term(j, testsupport::uniform(gen, -10.0, 10.0));
    }
    for (int i = 0; i < rows; ++i) {
        std::vector<Term> terms;
        for (int j = 0; j < cols; ++j) {
            if (testsupport::uniform(gen, 0.0, 1.0) < 0.4) {
                terms.push_back({j, testsupport::uniform(gen, -4.0, 4.0)});
            }
        }
        const double rhs = testsupport::uniform(gen, -6.0, 6.0);
        const int pick = testsupport::uniform_int(gen, 0, 2);
        const RowSense sense = pick == 0   ? RowSense::le
                               : pick == 1 ? RowSense::ge
                                           : RowSense::eq;
        m.add_constraint("c" + std::to_string(i), std::move(terms), sense, rhs);
    }
    return m;
}

}  // namespace

TEST_SUITE("simplex") {

TEST_CASE("bound-active optimum: min x subject to x >= 3") {
    MilpModel m("t");
    const int x = m.add_variable("x", VarKind::continuous, 0.0, 100.0);
    m.add_objective_term(x, 1.0);
    m.add_constraint("floor", {{x, 1.0}}, RowSense::ge, 3.0);
    const auto sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(sol.values[x] == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("textbook vertex: min -x-y subject to x+y <= 1") {
    MilpModel m("t");
    const int x = m.add_variable("x", VarKind::continuous, 0.0, 10.0);
    const int y = m.add_variable("y", VarKind::continuous, 0.0, 10.0);
    m.add_objective_term(x, -1.0);
    m.add_objective_term(y, -1.0);
    m.add_constraint("cap", {{x, 1.0}, {y, 1.0}}, RowSense::le, 1.0);
    const auto sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(sol.values[x] + sol.values[y] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("an empty polytope is reported infeasible") {
    MilpModel m("t");
    const int x = m.add_variable("x", VarKind::continuous, -100.0, 100.0);
    m.add_constraint("ge", {{x, 1.0}}, RowSense::ge, 3.0);
    m.add_constraint("le", {{x, 1.0}}, RowSense::le, 2.0);
    const auto sol = solve_lp(m);
    CHECK(sol.status == LpStatus::infeasible);
    CHECK(sol.infeasibility > 0.5);
}

TEST_CASE("unbounded rays are detected") {
    MilpModel m("t");
    const int x = m.add_variable("x", VarKind::continuous, 0.0,
                                 std::numeric_limits<double>::infinity());
    m.add_objective_term(x, -1.0);
    m.add_constraint("r", {{x, -1.0}}, RowSense::le, 0.0);
    const auto sol = solve_lp(m);
    CHECK(sol.status == LpStatus::unbounded);
}

TEST_CASE("free variables and negative bounds") {
    MilpModel m("t");
    const double inf = std::numeric_limits<double>::infinity();
    const int x = m.add_variable("x", VarKind::continuous, -inf, inf);
    const int y = m.add_variable("y", VarKind::continuous, -4.0, -1.0);
    m.add_objective_term(x, 1.0);
    m.add_objective_term(y, 1.0);
    m.add_constraint("link", {{x, 1.0}, {y, -1.0}}, RowSense::ge, 2.0);
    const auto sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    // x >= 2 + y, both pushed down: y = -4, x = -2
    CHECK(sol.objective == doctest::Approx(-6.0).epsilon(1e-9));
}

TEST_CASE("LP relaxation of the knapsack sits at a = 1") {
    const auto m = knapsack_relaxation();
    const auto sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(sol.values[0] == doctest::Approx(1.0));
}

TEST_CASE("iteration limit raises") {
    std::mt19937_64 gen(3);
    auto m = random_lp(gen, 30, 40);
    LpOptions opt;
    opt.max_iter = 2;
    SimplexSolver solver(m, opt);
    CHECK_THROWS_AS(solver.solve(), IterationLimit);
}

TEST_CASE("fixed-bound override pins a column") {
    auto m = knapsack_relaxation();
    SimplexSolver solver(m);
    const BoundOverride fix_a[] = {{0, 0.0, 0.0}};
    const auto sol = solver.solve(fix_a);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.values[0] == doctest::Approx(0.0));
    CHECK(sol.objective == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("warm starts reproduce the same optimum") {
    std::mt19937_64 gen(11);
    for (int rep = 0; rep < 20; ++rep) {
        auto m = random_lp(gen, 25, 35);
        SimplexSolver solver(m);
        const auto cold = solver.solve();
        if (cold.status != LpStatus::optimal) continue;
        const auto warm = solver.solve({}, &cold.basis);
        REQUIRE(warm.status == LpStatus::optimal);
        CHECK(warm.objective ==
              doctest::Approx(cold.objective).epsilon(1e-9));
        CHECK(warm.iterations <= cold.iterations);
    }
}

TEST_CASE("strong duality holds at random optima") {
    std::mt19937_64 gen(42);
    int optimal_seen = 0;
    for (int rep = 0; rep < 60; ++rep) {
        auto m = random_lp(gen, testsupport::uniform_int(gen, 5, 40),
                           testsupport::uniform_int(gen, 5, 50));
        const auto sol = solve_lp(m);
        if (sol.status != LpStatus::optimal) continue;
        ++optimal_seen;
        const double scale = std::max(1.0, std::abs(sol.objective));
        CHECK(std::abs(sol.objective - sol.dual_objective) / scale < 1e-6);
        // primal feasibility at the reported solution
        CHECK(m.max_violation(sol.values) < 1e-6);
    }
    CHECK(optimal_seen > 10);
}

TEST_CASE("degenerate cycling example terminates (Bland safeguard)") {
    // Beale's classic cycling instance for Dantzig pricing.
    MilpModel m("beale");
    const double inf = std::numeric_limits<double>::infinity();
    const int x1 = m.add_variable("x1", VarKind::continuous, 0.0, inf);
    const int x2 = m.add_variable("x2", VarKind::continuous, 0.0, inf);
    const int x3 = m.add_variable("x3", VarKind::continuous, 0.0, inf);
    const int x4 = m.add_variable("x4", VarKind::continuous, 0.0, inf);
    m.add_objective_term(x1, -0.75);
    m.add_objective_term(x2, 150.0);
    m.add_objective_term(x3, -0.02);
    m.add_objective_term(x4, 6.0);
    m.add_constraint("r1", {{x1, 0.25}, {x2, -60.0}, {x3, -1.0 / 25.0}, {x4, 9.0}},
                     RowSense::le, 0.0);
    m.add_constraint("r2", {{x1, 0.5}, {x2, -90.0}, {x3, -1.0 / 50.0}, {x4, 3.0}},
                     RowSense::le, 0.0);
    m.add_constraint("r3", {{x3, 1.0}}, RowSense::le, 1.0);
    const auto sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-0.05).epsilon(1e-9));
}

}  // TEST_SUITE
