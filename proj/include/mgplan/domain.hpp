// Core data types shared by every other module: network, asset fleets,
// load demands, representative days, and the assembled planning case.
// All types are immutable by convention once a case has been validated;
// they carry no behaviour beyond the structural checks in validate_case().

#ifndef MGPLAN_DOMAIN_HPP
#define MGPLAN_DOMAIN_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mgplan {

/// Hours per representative day. The whole model is built around daily
/// dispatch blocks, so this is a hard constant rather than a parameter.
inline constexpr int kHoursPerDay = 24;

using DayProfile = std::array<double, kHoursPerDay>;

struct Node {
    std::string id;
    bool is_slack = false;
    double vmin = 0.94;  // per-unit
    double vmax = 1.06;  // per-unit
};

struct Line {
    std::string from;  // upstream node (toward the slack)
    std::string to;    // downstream node
    double r = 0.0;    // per-unit resistance
    double x = 0.0;    // per-unit reactance
    double pmax = 0.0;  // kW
    double qmax = 0.0;  // kVAr
    std::optional<double> smax;  // kVA, enables polygonal apparent-power limits
};

struct Network {
    std::vector<Node> nodes;
    std::vector<Line> lines;

    /// Index of the node with the given id, or -1.
    int node_index(const std::string& id) const;
    /// Index of the unique slack node, or -1 if absent/ambiguous.
    int slack_index() const;
};

struct DieselUnit {
    std::string id;
    std::string node;
    double pmax = 0.0;           // kW
    double qmin = 0.0;           // kVAr
    double qmax = 0.0;           // kVAr
    double marginal_cost = 0.0;  // currency per kWh
};

enum class ResTechnology { solar, wind };

struct ResUnit {
    std::string id;
    std::string node;
    ResTechnology technology = ResTechnology::wind;
    double capacity = 0.0;         // kW
    double qmin = 0.0;             // kVAr
    double qmax = 0.0;             // kVAr
    double annualized_cost = 0.0;  // currency per year if built
    double marginal_cost = 0.0;    // currency per kWh
    std::string profile_key;       // availability profile reference
};

struct BatteryUnit {
    std::string id;
    std::string node;
    double emax = 0.0;        // kWh
    double emin = 0.0;        // kWh
    double e_ini_frac = 0.5;  // initial energy as a fraction of emax
    double pc_max = 0.0;      // kW charging
    double pd_max = 0.0;      // kW discharging
    double eta_c = 1.0;       // charging efficiency, (0,1]
    double eta_d = 1.0;       // discharging efficiency, (0,1]
    double qmin = 0.0;        // kVAr
    double qmax = 0.0;        // kVAr
    double annualized_cost = 0.0;  // currency per year if built
};

struct LoadDemand {
    std::string id;
    std::string node;
    double peak = 0.0;            // kW
    double power_factor = 1.0;    // (0,1]
    double curtail_penalty = 0.0;  // currency per kWh unserved
    std::string profile_key;       // demand profile reference
};

/// One weighted 24-hour scenario. Profiles are normalized to [0,1]:
/// demand as a fraction of each load's peak, availability as a fraction
/// of each RES unit's capacity.
struct RepresentativeDay {
    std::string id;
    double weight = 0.0;  // days of the year this scenario stands for
    std::map<std::string, DayProfile> demand_profile;
    std::map<std::string, DayProfile> availability_profile;
};

enum class CurtailmentMode { binary, continuous };

struct PlanningCase {
    Network network;
    std::vector<DieselUnit> diesel;
    std::vector<ResUnit> res_candidates;
    std::vector<BatteryUnit> battery_candidates;
    std::vector<LoadDemand> demands;
    std::vector<RepresentativeDay> scenarios;
    double res_curtail_penalty = 0.0;  // currency per kWh spilled
    CurtailmentMode curtailment_mode = CurtailmentMode::binary;
    std::optional<int> polygon_sides;  // >= 4 when set
    double year_days = 365.0;          // scenario weights must sum to this
    double base_mva = 1.0;             // per-unit power base
};

struct Violation {
    std::string entity;   // e.g. "node n3", "battery b1", "network"
    std::string message;  // the invariant that failed
};

/// Checks every structural invariant of the case and returns one entry
/// per violation; an empty list means the case is safe to formulate.
/// Pure and idempotent; never throws.
std::vector<Violation> validate_case(const PlanningCase& c);

}  // namespace mgplan

#endif
