#include "mgplan/domain.hpp"

#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace mgplan {

int Network::node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return static_cast<int>(i);
    return -1;
}

int Network::slack_index() const {
    int found = -1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!nodes[i].is_slack) continue;
        if (found >= 0) return -1;
        found = static_cast<int>(i);
    }
    return found;
}

namespace {

void check_nodes(const PlanningCase& c, std::vector<Violation>& out) {
    int slack_count = 0;
    std::unordered_set<std::string> seen;
    for (const auto& n : c.network.nodes) {
        if (!seen.insert(n.id).second)
            out.push_back({"node " + n.id, "duplicate node id"});
        if (n.vmin > n.vmax)
            out.push_back({"node " + n.id, "vmin > vmax"});
        if (n.is_slack) {
            ++slack_count;
            if (n.vmin > 1.0 || n.vmax < 1.0)
                out.push_back({"node " + n.id, "slack voltage bounds must admit 1.0"});
        }
    }
    if (slack_count == 0)
        out.push_back({"network", "no slack node"});
    else if (slack_count > 1)
        out.push_back({"network", "multiple slack nodes"});
}

void check_lines(const PlanningCase& c, std::vector<Violation>& out) {
    for (const auto& l : c.network.lines) {
        const std::string ent = "line " + l.from + ">" + l.to;
        if (l.from == l.to) out.push_back({ent, "self-loop (from == to)"});
        if (l.r < 0.0) out.push_back({ent, "negative resistance"});
        if (l.x < 0.0) out.push_back({ent, "negative reactance"});
        if (!(l.pmax > 0.0)) out.push_back({ent, "pmax must be > 0"});
        if (!(l.qmax > 0.0)) out.push_back({ent, "qmax must be > 0"});
        if (l.smax && !(*l.smax > 0.0)) out.push_back({ent, "smax must be > 0"});
        if (c.network.node_index(l.from) < 0)
            out.push_back({ent, "unknown endpoint " + l.from});
        if (c.network.node_index(l.to) < 0)
            out.push_back({ent, "unknown endpoint " + l.to});
    }
}

// The line graph must be a tree of directed parent->child edges rooted at
// the slack: every non-slack node has exactly one incoming line and its
// parent chain must reach the slack without revisiting a node.
void check_radial(const PlanningCase& c, std::vector<Violation>& out) {
    const auto& net = c.network;
    const int slack = net.slack_index();
    if (slack < 0) return;  // already reported

    std::unordered_map<std::string, int> incoming;
    std::unordered_map<std::string, std::string> parent;
    for (const auto& n : net.nodes) incoming[n.id] = 0;
    bool endpoints_ok = true;
    for (const auto& l : net.lines) {
        if (net.node_index(l.from) < 0 || net.node_index(l.to) < 0) {
            endpoints_ok = false;
            continue;
        }
        incoming[l.to] += 1;
        parent[l.to] = l.from;
    }
    if (!endpoints_ok) return;

    for (const auto& n : net.nodes) {
        const int deg = incoming[n.id];
        if (n.is_slack && deg != 0)
            out.push_back({"node " + n.id, "slack node has an incoming line"});
        if (!n.is_slack && deg != 1) {
            out.push_back({"node " + n.id,
                           fmt::format("network not radial: {} incoming lines", deg)});
        }
    }

    // Walk each parent chain; a chain that revisits a node is a cycle.
    for (const auto& n : net.nodes) {
        std::unordered_set<std::string> visited;
        std::string cur = n.id;
        while (true) {
            if (!visited.insert(cur).second) {
                out.push_back({"node " + n.id, "network not radial: cycle in lines"});
                break;
            }
            auto it = parent.find(cur);
            if (it == parent.end()) break;  // reached a root
            cur = it->second;
        }
    }
}

void check_units(const PlanningCase& c, std::vector<Violation>& out) {
    std::unordered_set<std::string> ids;
    auto claim_id = [&](const std::string& ent, const std::string& id) {
        if (id.empty()) out.push_back({ent, "empty id"});
        if (!ids.insert(id).second)
            out.push_back({ent, "duplicate unit/demand id " + id});
    };
    auto check_node_ref = [&](const std::string& ent, const std::string& node) {
        if (c.network.node_index(node) < 0)
            out.push_back({ent, "unknown node id " + node});
    };

    for (const auto& g : c.diesel) {
        const std::string ent = "diesel " + g.id;
        claim_id(ent, g.id);
        check_node_ref(ent, g.node);
        if (g.pmax < 0.0) out.push_back({ent, "pmax must be >= 0"});
        if (g.qmin > g.qmax) out.push_back({ent, "qmin > qmax"});
        if (g.marginal_cost < 0.0) out.push_back({ent, "negative marginal cost"});
    }
    for (const auto& g : c.res_candidates) {
        const std::string ent = "res " + g.id;
        claim_id(ent, g.id);
        check_node_ref(ent, g.node);
        if (!(g.capacity > 0.0)) out.push_back({ent, "capacity must be > 0"});
        if (g.qmin > g.qmax) out.push_back({ent, "qmin > qmax"});
        if (g.annualized_cost < 0.0) out.push_back({ent, "negative annualized cost"});
        for (const auto& s : c.scenarios) {
            if (!s.availability_profile.count(g.profile_key)) {
                out.push_back({ent, "profile_key " + g.profile_key +
                                        " missing in scenario " + s.id});
            }
        }
    }
    for (const auto& b : c.battery_candidates) {
        const std::string ent = "battery " + b.id;
        claim_id(ent, b.id);
        check_node_ref(ent, b.node);
        if (b.emin < 0.0 || b.emin > b.emax)
            out.push_back({ent, "requires 0 <= emin <= emax"});
        if (b.e_ini_frac < 0.0 || b.e_ini_frac > 1.0)
            out.push_back({ent, "e_ini_frac outside [0,1]"});
        else if (b.e_ini_frac * b.emax < b.emin || b.e_ini_frac * b.emax > b.emax)
            out.push_back({ent, "initial energy outside [emin, emax]"});
        if (b.pc_max < 0.0 || b.pd_max < 0.0)
            out.push_back({ent, "charge/discharge power must be >= 0"});
        if (!(b.eta_c > 0.0 && b.eta_c <= 1.0))
            out.push_back({ent, "eta_c outside (0,1]"});
        if (!(b.eta_d > 0.0 && b.eta_d <= 1.0))
            out.push_back({ent, "eta_d outside (0,1]"});
        if (b.qmin > b.qmax) out.push_back({ent, "qmin > qmax"});
        if (b.annualized_cost < 0.0) out.push_back({ent, "negative annualized cost"});
    }
    for (const auto& d : c.demands) {
        const std::string ent = "demand " + d.id;
        claim_id(ent, d.id);
        check_node_ref(ent, d.node);
        if (d.peak < 0.0) out.push_back({ent, "peak must be >= 0"});
        if (!(d.power_factor > 0.0 && d.power_factor <= 1.0))
            out.push_back({ent, "power_factor outside (0,1]"});
        if (d.curtail_penalty < 0.0) out.push_back({ent, "negative curtailment penalty"});
        for (const auto& s : c.scenarios) {
            if (!s.demand_profile.count(d.profile_key)) {
                out.push_back({ent, "profile_key " + d.profile_key +
                                        " missing in scenario " + s.id});
            }
        }
    }
}

void check_scenarios(const PlanningCase& c, std::vector<Violation>& out) {
    double weight_sum = 0.0;
    std::unordered_set<std::string> ids;
    for (const auto& s : c.scenarios) {
        const std::string ent = "scenario " + s.id;
        if (!ids.insert(s.id).second) out.push_back({ent, "duplicate scenario id"});
        if (s.weight < 0.0) out.push_back({ent, "negative weight"});
        weight_sum += s.weight;
        auto check_profiles = [&](const std::map<std::string, DayProfile>& m) {
            for (const auto& [key, prof] : m)
                for (double v : prof)
                    if (!(v >= 0.0 && v <= 1.0)) {
                        out.push_back({ent, "profile " + key + " has value outside [0,1]"});
                        break;
                    }
        };
        check_profiles(s.demand_profile);
        check_profiles(s.availability_profile);
    }
    if (c.scenarios.empty()) {
        out.push_back({"case", "no scenarios"});
    } else if (std::abs(weight_sum - c.year_days) > 1e-6 * std::max(1.0, c.year_days)) {
        out.push_back({"case", fmt::format("scenario weights sum to {} instead of {}",
                                           weight_sum, c.year_days)});
    }
}

void check_case_fields(const PlanningCase& c, std::vector<Violation>& out) {
    if (c.res_curtail_penalty < 0.0)
        out.push_back({"case", "negative RES curtailment penalty"});
    if (c.polygon_sides && *c.polygon_sides < 4)
        out.push_back({"case", "polygon_sides must be >= 4"});
    if (!(c.year_days > 0.0)) out.push_back({"case", "year_days must be > 0"});
    if (!(c.base_mva > 0.0)) out.push_back({"case", "base_mva must be > 0"});
}

}  // namespace

std::vector<Violation> validate_case(const PlanningCase& c) {
    std::vector<Violation> out;
    check_nodes(c, out);
    check_lines(c, out);
    check_radial(c, out);
    check_units(c, out);
    check_scenarios(c, out);
    check_case_fields(c, out);
    return out;
}

}  // namespace mgplan
