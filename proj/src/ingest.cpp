#include "mgplan/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "mgplan/csv.hpp"

namespace mgplan::ingest {

using nlohmann::json;

ParseError::ParseError(const std::string& msg, int line_number)
    : std::runtime_error(fmt::format("{} (line {})", msg, line_number)),
      line(line_number) {}

CaseValidationError::CaseValidationError(std::vector<Violation> v)
    : std::runtime_error([&v] {
          std::string msg = "case failed validation:";
          for (const auto& viol : v)
              msg += "\n  " + viol.entity + ": " + viol.message;
          return msg;
      }()),
      violations(std::move(v)) {}

YearSeries read_series(const std::filesystem::path& path, SeriesKind kind,
                       const std::string& key) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    YearSeries out;
    out.key = key.empty() ? path.stem().string() : key;
    out.kind = kind;
    out.values.reserve(kHoursPerYear);

    std::string line;
    int line_no = 0;
    bool first_content_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        auto cells = csv::split_line(line);
        if (cells.size() == 1 && cells[0].empty()) continue;  // blank line
        if (cells.size() != 1)
            throw ParseError("expected a single column", line_no);
        auto v = csv::parse_double(cells[0]);
        if (!v) {
            if (first_content_row) {  // optional header row
                first_content_row = false;
                continue;
            }
            throw ParseError("malformed value '" + cells[0] + "'", line_no);
        }
        first_content_row = false;
        if (*v < 0.0)
            throw SignError(fmt::format("negative value {} at line {} of {}",
                                        *v, line_no, path.string()));
        out.values.push_back(*v);
    }
    if (out.values.size() != kHoursPerYear) {
        throw LengthError(fmt::format("{}: expected {} rows, found {}",
                                      path.string(), kHoursPerYear,
                                      out.values.size()));
    }
    return out;
}

void write_series(const std::filesystem::path& path,
                  const std::vector<double>& values) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (double v : values) out << csv::format_double(v) << '\n';
}

NormalizedLoad normalize_load(const YearSeries& series) {
    if (series.kind != SeriesKind::load)
        throw std::invalid_argument("normalize_load: series is not a load");
    const double peak = *std::max_element(series.values.begin(), series.values.end());
    if (!(peak > 0.0))
        throw ZeroPeakError("normalize_load: series peak is zero");
    NormalizedLoad out;
    out.peak = peak;
    out.pattern.reserve(series.values.size());
    for (double v : series.values) out.pattern.push_back(v / peak);
    return out;
}

namespace {

double require_cell(const csv::Table& t, std::size_t row, const char* col,
                    const std::string& context) {
    const int c = t.column(col);
    if (c < 0)
        throw std::runtime_error(context + ": missing column '" + col + "'");
    auto v = csv::parse_double(t.rows[row][c]);
    if (!v) {
        throw ParseError(
            fmt::format("{}: bad value '{}' in column '{}'",
                        context, t.rows[row][c], col),
            t.row_lines[row]);
    }
    return *v;
}

double optional_cell(const csv::Table& t, std::size_t row, const char* col,
                     double fallback) {
    const int c = t.column(col);
    if (c < 0) return fallback;
    auto v = csv::parse_double(t.rows[row][c]);
    return v ? *v : fallback;
}

std::string text_cell(const csv::Table& t, std::size_t row, const char* col) {
    const int c = t.column(col);
    return c < 0 ? std::string{} : t.rows[row][c];
}

Network read_network(const std::filesystem::path& nodes_path,
                     const std::filesystem::path& lines_path) {
    Network net;
    const auto nodes = csv::read_table(nodes_path);
    const std::string nctx = nodes_path.filename().string();
    for (std::size_t i = 0; i < nodes.rows.size(); ++i) {
        Node n;
        n.id = text_cell(nodes, i, "id");
        const std::string flag = text_cell(nodes, i, "is_slack");
        n.is_slack = (flag == "1" || flag == "true" || flag == "yes");
        n.vmin = require_cell(nodes, i, "vmin", nctx);
        n.vmax = require_cell(nodes, i, "vmax", nctx);
        net.nodes.push_back(std::move(n));
    }
    const auto lines = csv::read_table(lines_path);
    const std::string lctx = lines_path.filename().string();
    for (std::size_t i = 0; i < lines.rows.size(); ++i) {
        Line l;
        l.from = text_cell(lines, i, "from");
        l.to = text_cell(lines, i, "to");
        l.r = require_cell(lines, i, "r", lctx);
        l.x = require_cell(lines, i, "x", lctx);
        l.pmax = require_cell(lines, i, "pmax", lctx);
        l.qmax = require_cell(lines, i, "qmax", lctx);
        const int sc = lines.column("smax");
        if (sc >= 0) {
            if (auto s = csv::parse_double(lines.rows[i][sc])) l.smax = *s;
        }
        net.lines.push_back(std::move(l));
    }
    return net;
}

bool tech_enabled(const CaseConfig& cfg, const std::string& tech) {
    return std::find(cfg.candidates.begin(), cfg.candidates.end(), tech) !=
           cfg.candidates.end();
}

// Annualized cost for a RES/battery row: the explicit CSV value wins,
// otherwise it is derived from the configured capital cost and lifetime.
double resolve_annualized_cost(const CaseConfig& cfg, const std::string& tech,
                               double capacity_kw, double explicit_cost) {
    if (explicit_cost >= 0.0) return explicit_cost;
    auto cap = cfg.capital_cost_per_mw.find(tech);
    auto life = cfg.lifetime_years.find(tech);
    if (cap == cfg.capital_cost_per_mw.end() || life == cfg.lifetime_years.end()) {
        throw std::runtime_error(
            "no annualized_cost given and no finance defaults for technology " +
            tech);
    }
    resources::CostModel model{cap->second, cfg.interest_rate, life->second};
    return resources::annualize(model, capacity_kw / 1000.0);
}

void read_assets(const std::filesystem::path& path, const CaseConfig& cfg,
                 CaseInputs& out) {
    const auto t = csv::read_table(path);
    const std::string ctx = path.filename().string();
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string type = text_cell(t, i, "type");
        const std::string id = text_cell(t, i, "id");
        const std::string node = text_cell(t, i, "node");
        if (type == "diesel") {
            if (!tech_enabled(cfg, "diesel")) continue;
            DieselUnit g;
            g.id = id;
            g.node = node;
            g.pmax = require_cell(t, i, "pmax", ctx);
            g.qmin = optional_cell(t, i, "qmin", 0.0);
            g.qmax = optional_cell(t, i, "qmax", 0.0);
            g.marginal_cost = require_cell(t, i, "marginal_cost", ctx);
            out.diesel.push_back(std::move(g));
        } else if (type == "res") {
            const std::string tech = text_cell(t, i, "technology");
            if (tech != "solar" && tech != "wind") {
                throw ParseError(fmt::format("{}: unknown technology '{}'",
                                             ctx, tech),
                                 t.row_lines[i]);
            }
            if (!tech_enabled(cfg, tech)) continue;
            ResUnit g;
            g.id = id;
            g.node = node;
            g.technology = tech == "solar" ? ResTechnology::solar
                                           : ResTechnology::wind;
            g.capacity = require_cell(t, i, "capacity", ctx);
            g.qmin = optional_cell(t, i, "qmin", 0.0);
            g.qmax = optional_cell(t, i, "qmax", 0.0);
            g.marginal_cost = optional_cell(t, i, "marginal_cost", 0.0);
            g.profile_key = text_cell(t, i, "profile_key");
            g.annualized_cost = resolve_annualized_cost(
                cfg, tech, g.capacity, optional_cell(t, i, "annualized_cost", -1.0));
            out.res_candidates.push_back(std::move(g));
        } else if (type == "battery") {
            if (!tech_enabled(cfg, "battery")) continue;
            BatteryUnit b;
            b.id = id;
            b.node = node;
            b.emax = require_cell(t, i, "emax", ctx);
            b.emin = optional_cell(t, i, "emin", 0.0);
            b.e_ini_frac = optional_cell(t, i, "e_ini_frac", 0.5);
            b.pc_max = require_cell(t, i, "pc_max", ctx);
            b.pd_max = require_cell(t, i, "pd_max", ctx);
            b.eta_c = optional_cell(t, i, "eta_c", 1.0);
            b.eta_d = optional_cell(t, i, "eta_d", 1.0);
            b.qmin = optional_cell(t, i, "qmin", 0.0);
            b.qmax = optional_cell(t, i, "qmax", 0.0);
            // rated on discharge power
            b.annualized_cost = resolve_annualized_cost(
                cfg, "battery", b.pd_max,
                optional_cell(t, i, "annualized_cost", -1.0));
            out.battery_candidates.push_back(std::move(b));
        } else if (type == "demand") {
            LoadDemand d;
            d.id = id;
            d.node = node;
            d.peak = optional_cell(t, i, "peak", -1.0);  // -1: take series peak
            d.power_factor = optional_cell(t, i, "power_factor", 1.0);
            d.curtail_penalty = require_cell(t, i, "curtail_penalty", ctx);
            d.profile_key = text_cell(t, i, "profile_key");
            out.demands.push_back(std::move(d));
        } else {
            throw ParseError(fmt::format("{}: unknown asset type '{}'", ctx, type),
                             t.row_lines[i]);
        }
    }
}

}  // namespace

CaseInputs load_inputs(const CaseFiles& files, const CaseConfig& config) {
    CaseInputs out;
    out.config = config;
    out.network = read_network(files.nodes, files.lines);
    read_assets(files.assets, config, out);

    std::map<std::string, double> series_peaks;
    for (const auto& s : files.series) {
        YearSeries raw = read_series(s.path, s.kind, s.key);
        switch (s.kind) {
            case SeriesKind::load: {
                NormalizedLoad norm = normalize_load(raw);
                series_peaks[s.key] = norm.peak;
                out.profiles.add(s.key, scenarios::ProfileKind::demand,
                                 std::move(norm.pattern));
                break;
            }
            case SeriesKind::irradiance: {
                std::vector<double> avail(raw.values.size());
                for (std::size_t t = 0; t < raw.values.size(); ++t) {
                    avail[t] = resources::solar_power(raw.values[t],
                                                      config.solar_model) /
                               config.solar_model.rated_power;
                }
                out.profiles.add(s.key, scenarios::ProfileKind::availability,
                                 std::move(avail));
                break;
            }
            case SeriesKind::windspeed: {
                std::vector<double> avail(raw.values.size());
                for (std::size_t t = 0; t < raw.values.size(); ++t) {
                    avail[t] = resources::wind_power(raw.values[t],
                                                     config.wind_curve) /
                               config.wind_curve.rated_power;
                }
                out.profiles.add(s.key, scenarios::ProfileKind::availability,
                                 std::move(avail));
                break;
            }
        }
    }

    // Demands without an explicit peak inherit the peak of their series.
    for (auto& d : out.demands) {
        if (d.peak >= 0.0) continue;
        auto it = series_peaks.find(d.profile_key);
        if (it == series_peaks.end()) {
            throw std::runtime_error("demand " + d.id +
                                     ": no peak given and no load series '" +
                                     d.profile_key + "'");
        }
        d.peak = it->second;
    }
    return out;
}

PlanningCase make_case(const CaseInputs& inputs,
                       std::vector<RepresentativeDay> scenario_set) {
    PlanningCase c;
    c.network = inputs.network;
    c.diesel = inputs.diesel;
    c.res_candidates = inputs.res_candidates;
    c.battery_candidates = inputs.battery_candidates;
    c.demands = inputs.demands;
    c.scenarios = std::move(scenario_set);
    c.res_curtail_penalty = inputs.config.res_curtail_penalty;
    c.curtailment_mode = inputs.config.curtailment_mode;
    c.polygon_sides = inputs.config.polygon_sides;
    c.year_days = inputs.config.year_days;
    c.base_mva = inputs.config.base_mva;
    return c;
}

PlanningCase assemble_case(const CaseFiles& files, const CaseConfig& config,
                           const ScenarioSpec& spec) {
    CaseInputs inputs = load_inputs(files, config);
    scenarios::Triplet triplet = scenarios::extract_triplet(
        inputs.profiles, spec.k_days, spec.seed, config.ranking,
        spec.kmeans_max_iter, spec.kmeans_tol);
    PlanningCase c = make_case(inputs, triplet.posture_set(spec.posture));
    auto violations = validate_case(c);
    if (!violations.empty()) throw CaseValidationError(std::move(violations));
    return c;
}

namespace {

SeriesKind parse_kind(const std::string& s) {
    if (s == "load") return SeriesKind::load;
    if (s == "irradiance") return SeriesKind::irradiance;
    if (s == "windspeed") return SeriesKind::windspeed;
    throw std::runtime_error("unknown series kind '" + s + "'");
}

}  // namespace

std::pair<CaseFiles, CaseConfig> read_case_json(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    const auto dir = path.parent_path();
    auto resolve = [&dir](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : dir / fp;
    };

    CaseFiles files;
    const auto& jf = j.at("files");
    files.nodes = resolve(jf.at("nodes").get<std::string>());
    files.lines = resolve(jf.at("lines").get<std::string>());
    files.assets = resolve(jf.at("assets").get<std::string>());
    for (const auto& js : j.at("series")) {
        files.series.push_back({js.at("key").get<std::string>(),
                                parse_kind(js.at("kind").get<std::string>()),
                                resolve(js.at("path").get<std::string>())});
    }

    CaseConfig cfg;
    cfg.name = j.value("name", path.stem().string());
    if (j.contains("candidates"))
        cfg.candidates = j.at("candidates").get<std::vector<std::string>>();
    cfg.res_curtail_penalty = j.value("res_curtail_penalty_per_kwh", 0.0);
    const std::string mode = j.value("curtailment_mode", "binary");
    if (mode == "binary") {
        cfg.curtailment_mode = CurtailmentMode::binary;
    } else if (mode == "continuous") {
        cfg.curtailment_mode = CurtailmentMode::continuous;
    } else {
        throw std::runtime_error("unknown curtailment_mode '" + mode + "'");
    }
    if (j.contains("polygon_sides") && !j.at("polygon_sides").is_null())
        cfg.polygon_sides = j.at("polygon_sides").get<int>();
    cfg.year_days = j.value("year_days", 365.0);
    cfg.base_mva = j.value("base_mva", 1.0);

    if (j.contains("wind_curve")) {
        const auto& w = j.at("wind_curve");
        cfg.wind_curve.cut_in = w.value("cut_in", cfg.wind_curve.cut_in);
        cfg.wind_curve.rated_speed = w.value("rated_speed", cfg.wind_curve.rated_speed);
        cfg.wind_curve.cut_out = w.value("cut_out", cfg.wind_curve.cut_out);
        cfg.wind_curve.rated_power = w.value("rated_power_kw", cfg.wind_curve.rated_power);
        cfg.wind_curve.hub_height = w.value("hub_height_m", cfg.wind_curve.hub_height);
        cfg.wind_curve.measurement_height =
            w.value("measurement_height_m", cfg.wind_curve.measurement_height);
        cfg.wind_curve.shear_exponent =
            w.value("shear_exponent", cfg.wind_curve.shear_exponent);
        if (w.value("law", "cubic") == "linear")
            cfg.wind_curve.law = resources::WindCurveLaw::linear;
    }
    if (j.contains("solar_model")) {
        const auto& s = j.at("solar_model");
        cfg.solar_model.efficiency = s.value("efficiency", cfg.solar_model.efficiency);
        cfg.solar_model.area = s.value("area_m2", cfg.solar_model.area);
        cfg.solar_model.rated_power = s.value("rated_power_kw", cfg.solar_model.rated_power);
    }
    if (j.contains("finance")) {
        const auto& f = j.at("finance");
        cfg.interest_rate = f.value("interest_rate", cfg.interest_rate);
        if (f.contains("capital_cost_per_mw"))
            for (const auto& [k, v] : f.at("capital_cost_per_mw").items())
                cfg.capital_cost_per_mw[k] = v.get<double>();
        if (f.contains("lifetime_years"))
            for (const auto& [k, v] : f.at("lifetime_years").items())
                cfg.lifetime_years[k] = v.get<double>();
    }
    if (j.contains("ranking")) {
        const auto& r = j.at("ranking");
        cfg.ranking.demand = r.value("demand_weight", 1.0);
        cfg.ranking.availability = r.value("availability_weight", -1.0);
        if (r.contains("per_key"))
            for (const auto& [k, v] : r.at("per_key").items())
                cfg.ranking.per_key[k] = v.get<double>();
    }
    return {std::move(files), std::move(cfg)};
}

}  // namespace mgplan::ingest
