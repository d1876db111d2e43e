#include <doctest.h>

#include <cmath>
#include <random>

#include "mgplan/branch_bound.hpp"
#include "mgplan/formulation.hpp"
#include "mgplan/simplex.hpp"
#include "support/test_cases.hpp"

using namespace mgplan;
using namespace mgplan::milp;

namespace {

PlanningCase single_bus_case() {
    PlanningCase c;
    c.network.nodes = {{"n0", true, 0.95, 1.05}};
    c.diesel = {{"d1", "n0", 800.0, -300.0, 300.0, 0.2}};
    LoadDemand dem;
    dem.id = "l1";
    dem.node = "n0";
    dem.peak = 500.0;
    dem.power_factor = 0.95;
    dem.curtail_penalty = 2.0;
    dem.profile_key = "load";
    c.demands = {dem};
    RepresentativeDay day;
    day.id = "o0";
    day.weight = 365.0;
    day.demand_profile["load"] = testsupport::flat_profile(0.8);
    c.scenarios = {day};
    return c;
}

double total_curtailment_penalty(const PlanningCase& c) {
    double sum = 0.0;
    for (const auto& day : c.scenarios)
        for (const auto& dem : c.demands)
            for (double f : day.demand_profile.at(dem.profile_key))
                sum += day.weight * dem.curtail_penalty * dem.peak * f;
    return sum;
}

}  // namespace

TEST_SUITE("formulation") {

TEST_CASE("single feasible dispatch: diesel serves the whole load") {
    const auto c = single_bus_case();
    REQUIRE(validate_case(c).empty());
    const auto m = build_milp(c);
    const auto res = solver::solve_milp(m);
    REQUIRE(res.status == solver::MilpStatus::optimal);
    const auto& x = res.incumbent->values;
    // all served, generation equals demand
    const double expected = 365.0 * 24 * 0.2 * (500.0 * 0.8);
    CHECK(res.incumbent->objective == doctest::Approx(expected).epsilon(1e-9));
    for (int t = 0; t < 24; ++t) {
        CHECK(x[m.column(names::service("l1", t, 0))] == doctest::Approx(1.0));
        CHECK(x[m.column(names::gen_p("d1", t, 0))] ==
              doctest::Approx(0.4).epsilon(1e-9));  // 400 kW in pu
    }
    const auto residuals = verify_solution(c, m, x);
    CHECK(residuals.worst() < 1e-8);
}

TEST_CASE("zero-availability wind candidates leave only curtailment cost") {
    auto c = testsupport::three_node_case();
    c.scenarios[0].availability_profile["wind"] = testsupport::flat_profile(0.0);
    c.diesel.clear();  // wind-only candidate set
    REQUIRE(validate_case(c).empty());
    const auto m = build_milp(c);
    const auto res = solver::solve_milp(m);
    REQUIRE(res.status == solver::MilpStatus::optimal);
    const double expected = total_curtailment_penalty(c);
    CHECK(std::abs(res.incumbent->objective - expected) <=
          1e-9 * std::max(1.0, expected));
    // nothing built, nothing served
    CHECK(res.incumbent->values[m.column(names::invest("w1"))] ==
          doctest::Approx(0.0));
    for (int t = 0; t < 24; ++t)
        CHECK(res.incumbent->values[m.column(names::service("l1", t, 0))] ==
              doctest::Approx(0.0));
}

TEST_CASE("variable and slack-row counts follow the index sets") {
    auto c = testsupport::three_node_case();
    c.scenarios.push_back(c.scenarios[0]);
    c.scenarios[0].weight = 200.0;
    c.scenarios[1].weight = 165.0;
    c.scenarios[1].id = "o1";
    const auto m = build_milp(c);

    const int N = 3, O = 2, T = 24;
    int volt_vars = 0, slack_rows = 0;
    for (const auto& v : m.variables())
        if (v.name.rfind("v[", 0) == 0) ++volt_vars;
    for (const auto& r : m.constraints())
        if (r.name.rfind("vslack[", 0) == 0) ++slack_rows;
    CHECK(volt_vars == N * O * T);
    CHECK(slack_rows == O * T);
}

TEST_CASE("a scenario missing a profile key raises FormulationError") {
    auto c = testsupport::three_node_case();
    c.scenarios[0].availability_profile.clear();
    CHECK_THROWS_AS(build_milp(c), FormulationError);
    auto c2 = testsupport::three_node_case();
    c2.scenarios.clear();
    CHECK_THROWS_AS(build_milp(c2), FormulationError);
}

TEST_CASE("non-built units are forced dark") {
    std::mt19937_64 gen(101);
    testsupport::RandomCaseSpec spec;
    spec.nodes = 3;
    spec.res = 2;
    spec.batteries = 1;
    spec.demands = 2;
    const auto c = testsupport::random_case(gen, spec);
    const auto m = build_milp(c);
    solver::SimplexSolver lp(m);
    std::vector<solver::BoundOverride> fix;
    for (const auto& u : c.res_candidates)
        fix.push_back({m.column(names::invest(u.id)), 0.0, 0.0});
    for (const auto& u : c.battery_candidates)
        fix.push_back({m.column(names::invest(u.id)), 0.0, 0.0});
    const auto sol = lp.solve(fix);
    REQUIRE(sol.status == solver::LpStatus::optimal);
    for (const auto& u : c.res_candidates) {
        for (int t = 0; t < 24; ++t) {
            CHECK(std::abs(sol.values[m.column(names::gen_p(u.id, t, 0))]) < 1e-9);
            CHECK(std::abs(sol.values[m.column(names::gen_q(u.id, t, 0))]) < 1e-9);
        }
    }
    for (const auto& u : c.battery_candidates) {
        for (int t = 0; t < 24; ++t) {
            CHECK(std::abs(sol.values[m.column(names::bat_charge(u.id, t, 0))]) < 1e-9);
            CHECK(std::abs(sol.values[m.column(names::bat_discharge(u.id, t, 0))]) < 1e-9);
        }
    }
}

TEST_CASE("scenario separability: per-scenario solves match the monolith") {
    std::mt19937_64 gen(55);
    testsupport::RandomCaseSpec spec;
    spec.nodes = 3;
    spec.res = 2;
    spec.batteries = 1;
    spec.demands = 2;
    spec.scenarios = 3;
    const auto c = testsupport::random_case(gen, spec);

    for (const double zfix : {0.0, 1.0}) {
        const auto m = build_milp(c);
        solver::SimplexSolver lp(m);
        std::vector<solver::BoundOverride> fix;
        for (const auto& u : c.res_candidates)
            fix.push_back({m.column(names::invest(u.id)), zfix, zfix});
        for (const auto& u : c.battery_candidates)
            fix.push_back({m.column(names::invest(u.id)), zfix, zfix});
        const auto whole = lp.solve(fix);
        REQUIRE(whole.status == solver::LpStatus::optimal);

        double sum = 0.0;
        for (const auto& day : c.scenarios) {
            PlanningCase sub = c;
            sub.scenarios = {day};
            sub.year_days = day.weight;
            const auto msub = build_milp(sub);
            solver::SimplexSolver lpsub(msub);
            std::vector<solver::BoundOverride> fsub;
            for (const auto& u : c.res_candidates)
                fsub.push_back({msub.column(names::invest(u.id)), zfix, zfix});
            for (const auto& u : c.battery_candidates)
                fsub.push_back({msub.column(names::invest(u.id)), zfix, zfix});
            const auto s = lpsub.solve(fsub);
            REQUIRE(s.status == solver::LpStatus::optimal);
            sum += s.objective;
        }
        // investment counted once per scenario subproblem
        double invest = 0.0;
        if (zfix == 1.0) {
            for (const auto& u : c.res_candidates) invest += u.annualized_cost;
            for (const auto& u : c.battery_candidates) invest += u.annualized_cost;
        }
        sum -= invest * (static_cast<double>(c.scenarios.size()) - 1.0);
        CHECK(std::abs(sum - whole.objective) <=
              1e-6 * std::max(1.0, std::abs(whole.objective)));
    }
}

TEST_CASE("zero spill price changes cost only, not feasibility") {
    std::mt19937_64 gen(77);
    testsupport::RandomCaseSpec spec;
    spec.nodes = 3;
    spec.res = 2;
    spec.demands = 2;
    auto c = testsupport::random_case(gen, spec);
    c.res_curtail_penalty = 0.0;
    const auto r0 = solver::solve_milp(build_milp(c));
    c.res_curtail_penalty = 0.5;
    const auto r1 = solver::solve_milp(build_milp(c));
    CHECK(r0.status == solver::MilpStatus::optimal);
    CHECK(r1.status == solver::MilpStatus::optimal);
    CHECK(r1.objective() >= r0.objective() - 1e-6);
}

TEST_CASE("polygon normals describe the unit circle") {
    const auto normals = polygon_normals(8);
    REQUIRE(normals.size() == 8);
    for (const auto& [cx, sx] : normals)
        CHECK(cx * cx + sx * sx == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(normals[0].first == doctest::Approx(1.0));
    CHECK(normals[2].second == doctest::Approx(1.0));
    CHECK_THROWS_AS(polygon_normals(3), FormulationError);
}

TEST_CASE("polygon rows appear for every side, limited line and hour") {
    auto c = testsupport::three_node_case();
    c.network.lines[0].smax = 1200.0;  // only the first line is limited
    c.polygon_sides = 8;
    const auto m = build_milp(c);
    int poly_rows = 0;
    for (const auto& r : m.constraints())
        if (r.name.rfind("poly[", 0) == 0) ++poly_rows;
    CHECK(poly_rows == 8 * 1 * 24 * 1);
}

TEST_CASE("battery invariants hold at a dispatch optimum") {
    // make the battery essential: cheap wind at night only, pricey diesel
    PlanningCase c;
    c.network.nodes = {{"n0", true, 0.95, 1.05}};
    mgplan::ResUnit wind;
    wind.id = "w1";
    wind.node = "n0";
    wind.capacity = 900.0;
    wind.annualized_cost = 1000.0;
    wind.profile_key = "wind";
    c.res_candidates = {wind};
    mgplan::BatteryUnit bat;
    bat.id = "b1";
    bat.node = "n0";
    bat.emax = 3000.0;
    bat.emin = 300.0;
    bat.e_ini_frac = 0.5;
    bat.pc_max = bat.pd_max = 700.0;
    bat.eta_c = bat.eta_d = 0.92;
    bat.annualized_cost = 2000.0;
    c.battery_candidates = {bat};
    mgplan::LoadDemand dem;
    dem.id = "l1";
    dem.node = "n0";
    dem.peak = 400.0;
    dem.power_factor = 1.0;
    dem.curtail_penalty = 5.0;
    dem.profile_key = "load";
    c.demands = {dem};
    RepresentativeDay day;
    day.id = "o0";
    day.weight = 365.0;
    DayProfile load = testsupport::flat_profile(0.9);
    DayProfile avail{};
    for (int h = 0; h < 24; ++h) avail[h] = h < 12 ? 1.0 : 0.0;  // windy nights
    day.demand_profile["load"] = load;
    day.availability_profile["wind"] = avail;
    c.scenarios = {day};
    REQUIRE(validate_case(c).empty());

    const auto m = build_milp(c);
    const auto res = solver::solve_milp(m);
    REQUIRE(res.status == solver::MilpStatus::optimal);
    const auto summary = summarize_dispatch(c, m, res.incumbent->values);
    CHECK(summary.built.at("b1"));  // storage is the only way to serve evenings
    CHECK(summary.built.at("w1"));
    const auto residuals = verify_solution(c, m, res.incumbent->values);
    CHECK(residuals.soc_neutrality < 1e-8);
    CHECK(residuals.soc_bounds < 1e-8);
    CHECK(residuals.balance_p < 1e-9);
}

TEST_CASE("dispatch summary reconciles with the solver objective") {
    std::mt19937_64 gen(202);
    for (int rep = 0; rep < 5; ++rep) {
        testsupport::RandomCaseSpec spec;
        spec.nodes = testsupport::uniform_int(gen, 2, 4);
        spec.res = 2;
        spec.batteries = 1;
        spec.demands = 2;
        spec.scenarios = 2;
        const auto c = testsupport::random_case(gen, spec);
        const auto m = build_milp(c);
        const auto res = solver::solve_milp(m);
        REQUIRE(res.status == solver::MilpStatus::optimal);
        const auto s = summarize_dispatch(c, m, res.incumbent->values);
        const double recomputed = s.invest_cost + s.operating_cost();
        CHECK(std::abs(recomputed - res.incumbent->objective) <=
              1e-6 * std::max(1.0, std::abs(res.incumbent->objective)));
        const auto residuals = verify_solution(c, m, res.incumbent->values);
        CHECK(residuals.balance_p < 1e-7);
        CHECK(residuals.balance_q < 1e-7);
        CHECK(residuals.voltage_drop < 1e-9);
        CHECK(residuals.voltage_bounds < 1e-7);
        CHECK(residuals.dark_asset < 1e-7);
    }
}

}  // TEST_SUITE
