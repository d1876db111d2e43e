// Translates a PlanningCase plus its representative-day set into a MILP:
// annualized investment binaries, hourly dispatch per scenario, linearized
// DistFlow network rows, battery energy coupling, and demand-service
// binaries, with optional polygonal apparent-power limits on lines.
//
// The model works in per-unit on case.base_mva: every power variable is
// pu (1 pu == base_mva MW), voltages are pu, and objective coefficients
// absorb the kWh conversion so costs come out in currency per year.
//
// Variable naming is a public contract (MPS columns stay auditable):
//   z[unit]            investment status, RES + battery candidates
//   p[gen][t][o]       active generation, diesel and RES
//   q[gen][t][o]       reactive generation
//   pc[bat][t][o]      battery charging, pd[...] discharging, qb[...] reactive
//   pl[from>to][t][o]  active line flow, ql[...] reactive
//   v[node][t][o]      voltage magnitude
//   y[demand][t][o]    service status (1 = served)

#ifndef MGPLAN_FORMULATION_HPP
#define MGPLAN_FORMULATION_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mgplan/domain.hpp"
#include "mgplan/milp_model.hpp"

namespace mgplan::milp {

MilpModel build_milp(const PlanningCase& c);

/// Outward normals (cos, sin pairs) of the K half-planes approximating the
/// unit disc: cos(2*pi*k/K) p + sin(2*pi*k/K) q <= s for k = 0..K-1.
std::vector<std::pair<double, double>> polygon_normals(int sides);

namespace names {
std::string invest(const std::string& unit);
std::string gen_p(const std::string& gen, int t, int o);
std::string gen_q(const std::string& gen, int t, int o);
std::string bat_charge(const std::string& bat, int t, int o);
std::string bat_discharge(const std::string& bat, int t, int o);
std::string bat_q(const std::string& bat, int t, int o);
std::string line_p(const Line& l, int t, int o);
std::string line_q(const Line& l, int t, int o);
std::string voltage(const std::string& node, int t, int o);
std::string service(const std::string& demand, int t, int o);
}  // namespace names

/// Costs and energies recomputed from a solved dispatch, independently of
/// the solver's reported objective.
struct DispatchSummary {
    std::map<std::string, bool> built;  // candidate id -> invested
    double invest_cost = 0.0;           // currency/yr
    double fuel_cost = 0.0;             // marginal generation cost
    double curtail_cost = 0.0;          // unserved-demand penalty
    double spill_cost = 0.0;            // RES spill penalty
    double curtailed_mwh = 0.0;         // unserved energy per year
    double spilled_mwh = 0.0;           // spilled RES energy per year

    double operating_cost() const { return fuel_cost + curtail_cost + spill_cost; }
    double total_cost() const { return invest_cost + operating_cost(); }
};

DispatchSummary summarize_dispatch(const PlanningCase& c, const MilpModel& m,
                                   std::span<const double> x);

/// Physical-consistency residuals of a solution, all as max absolute
/// violations in per-unit quantities.
struct ResidualReport {
    double balance_p = 0.0;   // nodal active balance
    double balance_q = 0.0;   // nodal reactive balance
    double voltage_drop = 0.0;  // r*p + x*q - (v_from - v_to)
    double voltage_bounds = 0.0;
    double soc_bounds = 0.0;      // battery energy outside [emin*z, emax*z]
    double soc_neutrality = 0.0;  // daily net stored energy
    double dark_asset = 0.0;      // activity of a non-built unit

    double worst() const;
};

ResidualReport verify_solution(const PlanningCase& c, const MilpModel& m,
                               std::span<const double> x);

}  // namespace mgplan::milp

#endif
