#include "mgplan/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace mgplan::milp {

namespace names {

std::string invest(const std::string& unit) { return fmt::format("z[{}]", unit); }
std::string gen_p(const std::string& g, int t, int o) {
    return fmt::format("p[{}][{}][{}]", g, t, o);
}
std::string gen_q(const std::string& g, int t, int o) {
    return fmt::format("q[{}][{}][{}]", g, t, o);
}
std::string bat_charge(const std::string& b, int t, int o) {
    return fmt::format("pc[{}][{}][{}]", b, t, o);
}
std::string bat_discharge(const std::string& b, int t, int o) {
    return fmt::format("pd[{}][{}][{}]", b, t, o);
}
std::string bat_q(const std::string& b, int t, int o) {
    return fmt::format("qb[{}][{}][{}]", b, t, o);
}
std::string line_p(const Line& l, int t, int o) {
    return fmt::format("pl[{}>{}][{}][{}]", l.from, l.to, t, o);
}
std::string line_q(const Line& l, int t, int o) {
    return fmt::format("ql[{}>{}][{}][{}]", l.from, l.to, t, o);
}
std::string voltage(const std::string& n, int t, int o) {
    return fmt::format("v[{}][{}][{}]", n, t, o);
}
std::string service(const std::string& d, int t, int o) {
    return fmt::format("y[{}][{}][{}]", d, t, o);
}

}  // namespace names

std::vector<std::pair<double, double>> polygon_normals(int sides) {
    if (sides < 4)
        throw FormulationError("polygon approximation needs at least 4 sides");
    std::vector<std::pair<double, double>> normals;
    normals.reserve(sides);
    for (int k = 0; k < sides; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / sides;
        normals.emplace_back(std::cos(angle), std::sin(angle));
    }
    return normals;
}

namespace {

// Per-scenario availability (pu) for a RES unit; throws when the scenario
// does not carry the unit's profile.
const DayProfile& availability_of(const ResUnit& g,
                                  const RepresentativeDay& day) {
    auto it = day.availability_profile.find(g.profile_key);
    if (it == day.availability_profile.end())
        throw FormulationError(fmt::format(
            "scenario {} lacks availability profile '{}' for unit {}", day.id,
            g.profile_key, g.id));
    return it->second;
}

const DayProfile& demand_of(const LoadDemand& d,
                            const RepresentativeDay& day) {
    auto it = day.demand_profile.find(d.profile_key);
    if (it == day.demand_profile.end())
        throw FormulationError(
            fmt::format("scenario {} lacks demand profile '{}' for demand {}",
                        day.id, d.profile_key, d.id));
    return it->second;
}

struct CaseIndex {
    int slack = -1;
    std::vector<int> parent_line;               // node -> incoming line, -1 at slack
    std::vector<std::vector<int>> child_lines;  // node -> outgoing lines
    std::vector<std::vector<int>> diesel_at, res_at, bat_at, dem_at;

    explicit CaseIndex(const PlanningCase& c) {
        const auto& net = c.network;
        const int nn = static_cast<int>(net.nodes.size());
        slack = net.slack_index();
        parent_line.assign(nn, -1);
        child_lines.assign(nn, {});
        for (std::size_t l = 0; l < net.lines.size(); ++l) {
            const int from = net.node_index(net.lines[l].from);
            const int to = net.node_index(net.lines[l].to);
            parent_line[to] = static_cast<int>(l);
            child_lines[from].push_back(static_cast<int>(l));
        }
        diesel_at.assign(nn, {});
        res_at.assign(nn, {});
        bat_at.assign(nn, {});
        dem_at.assign(nn, {});
        for (std::size_t i = 0; i < c.diesel.size(); ++i)
            diesel_at[net.node_index(c.diesel[i].node)].push_back(i);
        for (std::size_t i = 0; i < c.res_candidates.size(); ++i)
            res_at[net.node_index(c.res_candidates[i].node)].push_back(i);
        for (std::size_t i = 0; i < c.battery_candidates.size(); ++i)
            bat_at[net.node_index(c.battery_candidates[i].node)].push_back(i);
        for (std::size_t i = 0; i < c.demands.size(); ++i)
            dem_at[net.node_index(c.demands[i].node)].push_back(i);
    }
};

double reactive_factor(const LoadDemand& d) {
    return std::tan(std::acos(d.power_factor));
}

}  // namespace

MilpModel build_milp(const PlanningCase& c) {
    if (c.scenarios.empty()) throw FormulationError("case has no scenarios");
    const int O = static_cast<int>(c.scenarios.size());
    const int T = kHoursPerDay;
    const double s_kw = c.base_mva * 1000.0;  // kW per pu
    const CaseIndex idx(c);

    const int nd = static_cast<int>(c.diesel.size());
    const int nr = static_cast<int>(c.res_candidates.size());
    const int nb = static_cast<int>(c.battery_candidates.size());
    const int nl = static_cast<int>(c.network.lines.size());
    const int nn = static_cast<int>(c.network.nodes.size());
    const int nq = static_cast<int>(c.demands.size());

    MilpModel m("mgplan");
    const auto ykind = c.curtailment_mode == CurtailmentMode::binary
                           ? VarKind::binary
                           : VarKind::continuous;

    // --- first-stage investment columns ---
    std::vector<int> z_res(nr), z_bat(nb);
    for (int g = 0; g < nr; ++g)
        z_res[g] = m.add_variable(names::invest(c.res_candidates[g].id),
                                  VarKind::binary, 0.0, 1.0);
    for (int b = 0; b < nb; ++b)
        z_bat[b] = m.add_variable(names::invest(c.battery_candidates[b].id),
                                  VarKind::binary, 0.0, 1.0);

    // --- second-stage dispatch columns, (o, t) blocks ---
    auto at = [T](int o, int t, int i, int count) {
        return (o * T + t) * count + i;
    };
    std::vector<int> dp(O * T * std::max(nd, 1)), dq(dp.size());
    std::vector<int> rp(O * T * std::max(nr, 1)), rq(rp.size());
    std::vector<int> bpc(O * T * std::max(nb, 1)), bpd(bpc.size()), bq(bpc.size());
    std::vector<int> lp(O * T * std::max(nl, 1)), lq(lp.size());
    std::vector<int> vn(O * T * std::max(nn, 1));
    std::vector<int> yd(O * T * std::max(nq, 1));

    for (int o = 0; o < O; ++o) {
        const auto& day = c.scenarios[o];
        for (int t = 0; t < T; ++t) {
            for (int g = 0; g < nd; ++g) {
                const auto& u = c.diesel[g];
                dp[at(o, t, g, nd)] = m.add_variable(
                    names::gen_p(u.id, t, o), VarKind::continuous, 0.0, u.pmax / s_kw);
                dq[at(o, t, g, nd)] =
                    m.add_variable(names::gen_q(u.id, t, o), VarKind::continuous,
                                   u.qmin / s_kw, u.qmax / s_kw);
            }
            for (int g = 0; g < nr; ++g) {
                const auto& u = c.res_candidates[g];
                const double avail = availability_of(u, day)[t];
                rp[at(o, t, g, nr)] = m.add_variable(
                    names::gen_p(u.id, t, o), VarKind::continuous, 0.0,
                    u.capacity * avail / s_kw);
                rq[at(o, t, g, nr)] = m.add_variable(
                    names::gen_q(u.id, t, o), VarKind::continuous,
                    std::min(u.qmin, 0.0) / s_kw, std::max(u.qmax, 0.0) / s_kw);
            }
            for (int b = 0; b < nb; ++b) {
                const auto& u = c.battery_candidates[b];
                bpc[at(o, t, b, nb)] = m.add_variable(
                    names::bat_charge(u.id, t, o), VarKind::continuous, 0.0,
                    u.pc_max / s_kw);
                bpd[at(o, t, b, nb)] = m.add_variable(
                    names::bat_discharge(u.id, t, o), VarKind::continuous, 0.0,
                    u.pd_max / s_kw);
                bq[at(o, t, b, nb)] = m.add_variable(
                    names::bat_q(u.id, t, o), VarKind::continuous,
                    std::min(u.qmin, 0.0) / s_kw, std::max(u.qmax, 0.0) / s_kw);
            }
            for (int l = 0; l < nl; ++l) {
                const auto& line = c.network.lines[l];
                lp[at(o, t, l, nl)] = m.add_variable(
                    names::line_p(line, t, o), VarKind::continuous,
                    -line.pmax / s_kw, line.pmax / s_kw);
                lq[at(o, t, l, nl)] = m.add_variable(
                    names::line_q(line, t, o), VarKind::continuous,
                    -line.qmax / s_kw, line.qmax / s_kw);
            }
            for (int n = 0; n < nn; ++n) {
                const auto& node = c.network.nodes[n];
                vn[at(o, t, n, nn)] = m.add_variable(
                    names::voltage(node.id, t, o), VarKind::continuous, node.vmin,
                    node.vmax);
            }
            for (int d = 0; d < nq; ++d) {
                yd[at(o, t, d, nq)] = m.add_variable(
                    names::service(c.demands[d].id, t, o), ykind, 0.0, 1.0);
            }
        }
    }

    // --- objective ---
    for (int g = 0; g < nr; ++g)
        m.add_objective_term(z_res[g], c.res_candidates[g].annualized_cost);
    for (int b = 0; b < nb; ++b)
        m.add_objective_term(z_bat[b], c.battery_candidates[b].annualized_cost);
    for (int o = 0; o < O; ++o) {
        const auto& day = c.scenarios[o];
        const double tau = day.weight;
        for (int t = 0; t < T; ++t) {
            for (int g = 0; g < nd; ++g)
                m.add_objective_term(dp[at(o, t, g, nd)],
                                     tau * c.diesel[g].marginal_cost * s_kw);
            for (int g = 0; g < nr; ++g) {
                const auto& u = c.res_candidates[g];
                // spill penalty pc_r * (avail * z - p) keeps non-built units
                // free of phantom spill cost
                m.add_objective_term(rp[at(o, t, g, nr)],
                                     tau * (u.marginal_cost - c.res_curtail_penalty) * s_kw);
                const double avail_kw = u.capacity * availability_of(u, day)[t];
                m.add_objective_term(z_res[g],
                                     tau * c.res_curtail_penalty * avail_kw);
            }
            for (int d = 0; d < nq; ++d) {
                const auto& dem = c.demands[d];
                const double load_kw = dem.peak * demand_of(dem, day)[t];
                const double penalty = tau * dem.curtail_penalty * load_kw;
                m.add_objective_constant(penalty);
                m.add_objective_term(yd[at(o, t, d, nq)], -penalty);
            }
        }
    }

    // --- network, generation and battery rows ---
    const auto poly = c.polygon_sides ? polygon_normals(*c.polygon_sides)
                                      : std::vector<std::pair<double, double>>{};
    for (int o = 0; o < O; ++o) {
        const auto& day = c.scenarios[o];
        for (int t = 0; t < T; ++t) {
            for (int n = 0; n < nn; ++n) {
                const auto& node = c.network.nodes[n];
                std::vector<Term> p_terms, q_terms;
                if (idx.parent_line[n] >= 0) {
                    p_terms.push_back({lp[at(o, t, idx.parent_line[n], nl)], 1.0});
                    q_terms.push_back({lq[at(o, t, idx.parent_line[n], nl)], 1.0});
                }
                for (int g : idx.diesel_at[n]) {
                    p_terms.push_back({dp[at(o, t, g, nd)], 1.0});
                    q_terms.push_back({dq[at(o, t, g, nd)], 1.0});
                }
                for (int g : idx.res_at[n]) {
                    p_terms.push_back({rp[at(o, t, g, nr)], 1.0});
                    q_terms.push_back({rq[at(o, t, g, nr)], 1.0});
                }
                for (int b : idx.bat_at[n]) {
                    p_terms.push_back({bpd[at(o, t, b, nb)], 1.0});
                    p_terms.push_back({bpc[at(o, t, b, nb)], -1.0});
                    q_terms.push_back({bq[at(o, t, b, nb)], 1.0});
                }
                for (int l : idx.child_lines[n]) {
                    p_terms.push_back({lp[at(o, t, l, nl)], -1.0});
                    q_terms.push_back({lq[at(o, t, l, nl)], -1.0});
                }
                for (int d : idx.dem_at[n]) {
                    const auto& dem = c.demands[d];
                    const double load_pu =
                        dem.peak * demand_of(dem, day)[t] / s_kw;
                    p_terms.push_back({yd[at(o, t, d, nq)], -load_pu});
                    q_terms.push_back(
                        {yd[at(o, t, d, nq)], -reactive_factor(dem) * load_pu});
                }
                m.add_constraint(fmt::format("balp[{}][{}][{}]", node.id, t, o),
                                 std::move(p_terms), RowSense::eq, 0.0);
                m.add_constraint(fmt::format("balq[{}][{}][{}]", node.id, t, o),
                                 std::move(q_terms), RowSense::eq, 0.0);
            }
            for (int l = 0; l < nl; ++l) {
                const auto& line = c.network.lines[l];
                const int nfrom = c.network.node_index(line.from);
                const int nto = c.network.node_index(line.to);
                m.add_constraint(
                    fmt::format("vdrop[{}>{}][{}][{}]", line.from, line.to, t, o),
                    {{lp[at(o, t, l, nl)], line.r},
                     {lq[at(o, t, l, nl)], line.x},
                     {vn[at(o, t, nfrom, nn)], -1.0},
                     {vn[at(o, t, nto, nn)], 1.0}},
                    RowSense::eq, 0.0);
                if (!poly.empty() && line.smax) {
                    for (std::size_t k = 0; k < poly.size(); ++k) {
                        m.add_constraint(
                            fmt::format("poly[{}>{}][{}][{}][{}]", line.from,
                                        line.to, k, t, o),
                            {{lp[at(o, t, l, nl)], poly[k].first},
                             {lq[at(o, t, l, nl)], poly[k].second}},
                            RowSense::le, *line.smax / s_kw);
                    }
                }
            }
            m.add_constraint(fmt::format("vslack[{}][{}]", t, o),
                             {{vn[at(o, t, idx.slack, nn)], 1.0}}, RowSense::eq,
                             1.0);
            for (int g = 0; g < nr; ++g) {
                const auto& u = c.res_candidates[g];
                const double avail_pu =
                    u.capacity * availability_of(u, day)[t] / s_kw;
                if (avail_pu > 0.0) {
                    m.add_constraint(fmt::format("resp[{}][{}][{}]", u.id, t, o),
                                     {{rp[at(o, t, g, nr)], 1.0},
                                      {z_res[g], -avail_pu}},
                                     RowSense::le, 0.0);
                }
                if (u.qmin != 0.0 || u.qmax != 0.0) {
                    m.add_constraint(fmt::format("resqhi[{}][{}][{}]", u.id, t, o),
                                     {{rq[at(o, t, g, nr)], 1.0},
                                      {z_res[g], -u.qmax / s_kw}},
                                     RowSense::le, 0.0);
                    m.add_constraint(fmt::format("resqlo[{}][{}][{}]", u.id, t, o),
                                     {{rq[at(o, t, g, nr)], 1.0},
                                      {z_res[g], -u.qmin / s_kw}},
                                     RowSense::ge, 0.0);
                }
            }
            for (int b = 0; b < nb; ++b) {
                const auto& u = c.battery_candidates[b];
                if (u.pc_max > 0.0) {
                    m.add_constraint(fmt::format("bcap[{}][{}][{}]", u.id, t, o),
                                     {{bpc[at(o, t, b, nb)], 1.0},
                                      {z_bat[b], -u.pc_max / s_kw}},
                                     RowSense::le, 0.0);
                }
                if (u.pd_max > 0.0) {
                    m.add_constraint(fmt::format("bdis[{}][{}][{}]", u.id, t, o),
                                     {{bpd[at(o, t, b, nb)], 1.0},
                                      {z_bat[b], -u.pd_max / s_kw}},
                                     RowSense::le, 0.0);
                }
                if (u.qmin != 0.0 || u.qmax != 0.0) {
                    m.add_constraint(fmt::format("bqhi[{}][{}][{}]", u.id, t, o),
                                     {{bq[at(o, t, b, nb)], 1.0},
                                      {z_bat[b], -u.qmax / s_kw}},
                                     RowSense::le, 0.0);
                    m.add_constraint(fmt::format("bqlo[{}][{}][{}]", u.id, t, o),
                                     {{bq[at(o, t, b, nb)], 1.0},
                                      {z_bat[b], -u.qmin / s_kw}},
                                     RowSense::ge, 0.0);
                }
                // stored energy after hour t relative to the initial charge
                std::vector<Term> soc;
                for (int tau = 0; tau <= t; ++tau) {
                    soc.push_back({bpc[at(o, tau, b, nb)], u.eta_c});
                    soc.push_back({bpd[at(o, tau, b, nb)], -1.0 / u.eta_d});
                }
                const double emax_pu = u.emax / s_kw;
                const double emin_pu = u.emin / s_kw;
                auto soc_hi = soc;
                soc_hi.push_back({z_bat[b], (u.e_ini_frac - 1.0) * emax_pu});
                m.add_constraint(fmt::format("sochi[{}][{}][{}]", u.id, t, o),
                                 std::move(soc_hi), RowSense::le, 0.0);
                soc.push_back({z_bat[b], u.e_ini_frac * emax_pu - emin_pu});
                m.add_constraint(fmt::format("soclo[{}][{}][{}]", u.id, t, o),
                                 std::move(soc), RowSense::ge, 0.0);
            }
        }
        for (int b = 0; b < nb; ++b) {
            const auto& u = c.battery_candidates[b];
            std::vector<Term> terms;
            for (int t = 0; t < T; ++t) {
                terms.push_back({bpc[at(o, t, b, nb)], u.eta_c});
                terms.push_back({bpd[at(o, t, b, nb)], -1.0 / u.eta_d});
            }
            m.add_constraint(fmt::format("neutral[{}][{}]", u.id, o),
                             std::move(terms), RowSense::eq, 0.0);
        }
    }
    return m;
}

namespace {

double value_of(const MilpModel& m, std::span<const double> x,
                const std::string& name) {
    const int col = m.column(name);
    if (col < 0)
        throw FormulationError("solution lookup: unknown column " + name);
    return x[col];
}

}  // namespace

DispatchSummary summarize_dispatch(const PlanningCase& c, const MilpModel& m,
                                   std::span<const double> x) {
    DispatchSummary s;
    const int O = static_cast<int>(c.scenarios.size());
    const int T = kHoursPerDay;
    const double s_kw = c.base_mva * 1000.0;

    for (const auto& u : c.res_candidates) {
        const bool built = value_of(m, x, names::invest(u.id)) > 0.5;
        s.built[u.id] = built;
        if (built) s.invest_cost += u.annualized_cost;
    }
    for (const auto& u : c.battery_candidates) {
        const bool built = value_of(m, x, names::invest(u.id)) > 0.5;
        s.built[u.id] = built;
        if (built) s.invest_cost += u.annualized_cost;
    }

    for (int o = 0; o < O; ++o) {
        const auto& day = c.scenarios[o];
        const double tau = day.weight;
        for (int t = 0; t < T; ++t) {
            for (const auto& u : c.diesel) {
                const double p_kw =
                    value_of(m, x, names::gen_p(u.id, t, o)) * s_kw;
                s.fuel_cost += tau * u.marginal_cost * p_kw;
            }
            for (const auto& u : c.res_candidates) {
                const double p_kw =
                    value_of(m, x, names::gen_p(u.id, t, o)) * s_kw;
                s.fuel_cost += tau * u.marginal_cost * p_kw;
                if (s.built.at(u.id)) {
                    const double avail_kw =
                        u.capacity * day.availability_profile.at(u.profile_key)[t];
                    const double spilled = std::max(0.0, avail_kw - p_kw);
                    s.spill_cost += tau * c.res_curtail_penalty * spilled;
                    s.spilled_mwh += tau * spilled / 1000.0;
                }
            }
            for (const auto& dem : c.demands) {
                const double load_kw =
                    dem.peak * day.demand_profile.at(dem.profile_key)[t];
                const double served =
                    std::clamp(value_of(m, x, names::service(dem.id, t, o)), 0.0, 1.0);
                s.curtail_cost += tau * dem.curtail_penalty * load_kw * (1.0 - served);
                s.curtailed_mwh += tau * load_kw * (1.0 - served) / 1000.0;
            }
        }
    }
    return s;
}

double ResidualReport::worst() const {
    return std::max({balance_p, balance_q, voltage_drop, voltage_bounds,
                     soc_bounds, soc_neutrality, dark_asset});
}

ResidualReport verify_solution(const PlanningCase& c, const MilpModel& m,
                               std::span<const double> x) {
    ResidualReport r;
    const int O = static_cast<int>(c.scenarios.size());
    const int T = kHoursPerDay;
    const double s_kw = c.base_mva * 1000.0;
    const CaseIndex idx(c);
    const int nn = static_cast<int>(c.network.nodes.size());

    auto val = [&](const std::string& name) { return value_of(m, x, name); };

    for (int o = 0; o < O; ++o) {
        const auto& day = c.scenarios[o];
        for (int t = 0; t < T; ++t) {
            for (int n = 0; n < nn; ++n) {
                double p = 0.0, q = 0.0;
                if (idx.parent_line[n] >= 0) {
                    const auto& l = c.network.lines[idx.parent_line[n]];
                    p += val(names::line_p(l, t, o));
                    q += val(names::line_q(l, t, o));
                }
                for (int g : idx.diesel_at[n]) {
                    p += val(names::gen_p(c.diesel[g].id, t, o));
                    q += val(names::gen_q(c.diesel[g].id, t, o));
                }
                for (int g : idx.res_at[n]) {
                    p += val(names::gen_p(c.res_candidates[g].id, t, o));
                    q += val(names::gen_q(c.res_candidates[g].id, t, o));
                }
                for (int b : idx.bat_at[n]) {
                    p += val(names::bat_discharge(c.battery_candidates[b].id, t, o)) -
                         val(names::bat_charge(c.battery_candidates[b].id, t, o));
                    q += val(names::bat_q(c.battery_candidates[b].id, t, o));
                }
                for (int l : idx.child_lines[n]) {
                    p -= val(names::line_p(c.network.lines[l], t, o));
                    q -= val(names::line_q(c.network.lines[l], t, o));
                }
                for (int d : idx.dem_at[n]) {
                    const auto& dem = c.demands[d];
                    const double load_pu =
                        dem.peak * day.demand_profile.at(dem.profile_key)[t] / s_kw;
                    const double y = val(names::service(dem.id, t, o));
                    p -= load_pu * y;
                    q -= reactive_factor(dem) * load_pu * y;
                }
                r.balance_p = std::max(r.balance_p, std::abs(p));
                r.balance_q = std::max(r.balance_q, std::abs(q));

                const auto& node = c.network.nodes[n];
                const double v = val(names::voltage(node.id, t, o));
                r.voltage_bounds = std::max(
                    {r.voltage_bounds, node.vmin - v, v - node.vmax});
            }
            for (const auto& line : c.network.lines) {
                const double drop = line.r * val(names::line_p(line, t, o)) +
                                    line.x * val(names::line_q(line, t, o));
                const double dv = val(names::voltage(line.from, t, o)) -
                                  val(names::voltage(line.to, t, o));
                r.voltage_drop = std::max(r.voltage_drop, std::abs(drop - dv));
            }
        }
        for (const auto& u : c.battery_candidates) {
            const bool built = val(names::invest(u.id)) > 0.5;
            const double emax_pu = built ? u.emax / s_kw : 0.0;
            const double emin_pu = built ? u.emin / s_kw : 0.0;
            double energy = u.e_ini_frac * emax_pu;
            double net = 0.0;
            for (int t = 0; t < T; ++t) {
                const double pc = val(names::bat_charge(u.id, t, o));
                const double pd = val(names::bat_discharge(u.id, t, o));
                const double delta = u.eta_c * pc - pd / u.eta_d;
                energy += delta;
                net += delta;
                r.soc_bounds = std::max(
                    {r.soc_bounds, emin_pu - energy, energy - emax_pu});
                if (!built) {
                    r.dark_asset = std::max(
                        {r.dark_asset, std::abs(pc), std::abs(pd),
                         std::abs(val(names::bat_q(u.id, t, o)))});
                }
            }
            r.soc_neutrality = std::max(r.soc_neutrality, std::abs(net));
        }
        for (const auto& u : c.res_candidates) {
            if (val(names::invest(u.id)) > 0.5) continue;
            for (int t = 0; t < T; ++t) {
                r.dark_asset = std::max({r.dark_asset,
                                         std::abs(val(names::gen_p(u.id, t, o))),
                                         std::abs(val(names::gen_q(u.id, t, o)))});
            }
        }
    }
    return r;
}

}  // namespace mgplan::milp
