// Writes a small but complete on-disk case (CSV tables, year series, JSON
// case description) into a scratch directory for ingest/report tests.

#ifndef MGPLAN_TESTS_SUPPORT_FIXTURE_FILES_HPP
#define MGPLAN_TESTS_SUPPORT_FIXTURE_FILES_HPP

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

namespace testsupport {

inline void write_file(const std::filesystem::path& path,
                       const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline void write_series_file(const std::filesystem::path& path,
                              const std::vector<double>& values,
                              bool header = false) {
    std::ofstream out(path, std::ios::binary);
    if (header) out << "value\n";
    for (double v : values) out << v << '\n';
}

// Deterministic synthetic year: seasonal + diurnal structure, no RNG.
inline std::vector<double> synth_load_series() {
    std::vector<double> v(8760);
    for (int t = 0; t < 8760; ++t) {
        const int day = t / 24, hour = t % 24;
        const double seasonal =
            0.5 + 0.5 * std::cos(2.0 * std::numbers::pi * day / 365.0);
        const double diurnal =
            0.55 + 0.45 * std::sin(std::numbers::pi * (hour + 1) / 24.0);
        v[t] = 300.0 + 600.0 * seasonal * diurnal;
    }
    return v;
}

inline std::vector<double> synth_wind_series() {
    std::vector<double> v(8760);
    for (int t = 0; t < 8760; ++t) {
        const int day = t / 24, hour = t % 24;
        if (day % 11 == 3) {
            v[t] = 0.8;  // calm day, below cut-in even at hub height
        } else if (day % 7 < 2) {
            v[t] = 11.0 + std::sin(0.7 * hour);  // storm days, rated at hub
        } else {
            v[t] = 4.5 + 2.5 * std::sin(2.0 * std::numbers::pi * (day + hour) / 37.0);
        }
    }
    return v;
}

inline std::vector<double> synth_irradiance_series() {
    std::vector<double> v(8760);
    for (int t = 0; t < 8760; ++t) {
        const int day = t / 24, hour = t % 24;
        const double season =
            0.55 + 0.45 * std::cos(2.0 * std::numbers::pi * (day - 172) / 365.0);
        const double sun = std::sin(std::numbers::pi * (hour - 6) / 12.0);
        const double cloud = day % 5 == 0 ? 0.25 : 1.0;
        v[t] = hour >= 6 && hour <= 18 ? 950.0 * season * cloud * std::max(0.0, sun)
                                       : 0.0;
    }
    return v;
}

struct MiniCaseOptions {
    std::string candidates = R"(["diesel","battery","solar","wind"])";
    std::string curtailment = "binary";
    std::string extra = "";  // extra JSON fields, must start with a comma
};

/// Populates `dir` and returns the case JSON path.
inline std::filesystem::path write_mini_case(const std::filesystem::path& dir,
                                             const MiniCaseOptions& opt = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    write_file(dir / "nodes.csv",
               "id,is_slack,vmin,vmax\n"
               "n0,1,0.94,1.06\n"
               "n1,0,0.94,1.06\n"
               "n2,0,0.94,1.06\n");
    write_file(dir / "lines.csv",
               "from,to,r,x,pmax,qmax,smax\n"
               "n0,n1,0.008,0.016,2500,1800,2800\n"
               "n1,n2,0.012,0.024,2500,1800,\n");
    write_file(
        dir / "assets.csv",
        "type,id,node,technology,profile_key,capacity,pmax,qmin,qmax,"
        "marginal_cost,annualized_cost,peak,power_factor,curtail_penalty,"
        "emax,emin,e_ini_frac,pc_max,pd_max,eta_c,eta_d\n"
        "diesel,d1,n0,,,,700,-400,400,0.1962,,,,,,,,,,,\n"
        "res,w1,n0,wind,wind,1800,,0,0,0,,,,,,,,,,,\n"
        "res,s1,n1,solar,solar,1800,,0,0,0,,,,,,,,,,,\n"
        "battery,b1,n1,,,,,-200,200,,,,,,1200,120,0.5,600,600,0.95,0.95\n"
        "demand,l1,n1,,load,,,,,,,420,0.95,1.962,,,,,,,\n"
        "demand,l2,n2,,load,,,,,,,260,0.95,1.962,,,,,,,\n");

    write_series_file(dir / "load.csv", synth_load_series());
    write_series_file(dir / "wind.csv", synth_wind_series());
    write_series_file(dir / "solar.csv", synth_irradiance_series());

    const std::string json = std::string(R"({
  "name": "mini",
  "files": {"nodes": "nodes.csv", "lines": "lines.csv", "assets": "assets.csv"},
  "series": [
    {"key": "load", "kind": "load", "path": "load.csv"},
    {"key": "wind", "kind": "windspeed", "path": "wind.csv"},
    {"key": "solar", "kind": "irradiance", "path": "solar.csv"}
  ],
  "candidates": )") + opt.candidates + R"(,
  "curtailment_mode": ")" + opt.curtailment + R"(",
  "res_curtail_penalty_per_kwh": 0.0,
  "wind_curve": {"cut_in": 4, "rated_speed": 12, "cut_out": 25,
                  "rated_power_kw": 1800, "hub_height_m": 80,
                  "measurement_height_m": 10},
  "solar_model": {"efficiency": 0.10, "area_m2": 20000, "rated_power_kw": 1800},
  "finance": {"interest_rate": 0.053,
              "capital_cost_per_mw": {"battery": 980000, "solar": 840000, "wind": 1210000},
              "lifetime_years": {"battery": 15, "solar": 30, "wind": 30}})" +
                             opt.extra + "\n}\n";
    write_file(dir / "case.json", json);
    return dir / "case.json";
}

/// Unique scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("mgplan-test-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testsupport

#endif
