// File ingestion: hourly CSV time series, network and asset tables, and
// assembly of a validated PlanningCase from a JSON case description.
//
// File contracts (comma-separated, UTF-8, '.' decimal separator):
//   series CSV  one column, 8760 rows, optional header auto-detected
//   nodes CSV   id,is_slack,vmin,vmax
//   lines CSV   from,to,r,x,pmax,qmax[,smax]
//   assets CSV  one row per unit, discriminated by a `type` column
//               (diesel | res | battery | demand) with the domain fields
//               as columns; cells irrelevant to a type stay empty

#ifndef MGPLAN_INGEST_HPP
#define MGPLAN_INGEST_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgplan/domain.hpp"
#include "mgplan/resources.hpp"
#include "mgplan/scenarios.hpp"

namespace mgplan::ingest {

inline constexpr int kHoursPerYear = 8760;  // 365 days; leap years rejected

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line_number);
    int line = 0;  // 1-based file line
};
struct LengthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroPeakError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised by assemble_case when the assembled case fails validation; the
/// individual violations are kept for reporting.
struct CaseValidationError : std::runtime_error {
    explicit CaseValidationError(std::vector<Violation> violations);
    std::vector<Violation> violations;
};

enum class SeriesKind { load, irradiance, windspeed };

struct YearSeries {
    std::string key;
    SeriesKind kind = SeriesKind::load;
    std::vector<double> values;  // exactly kHoursPerYear, all >= 0
};

/// Reads a one-column hourly CSV. A single non-numeric first row is treated
/// as a header. Throws ParseError / LengthError / SignError.
YearSeries read_series(const std::filesystem::path& path, SeriesKind kind,
                       const std::string& key = "");

/// Writes values one per row; read_series on the result returns the same
/// values bit for bit.
void write_series(const std::filesystem::path& path,
                  const std::vector<double>& values);

struct NormalizedLoad {
    std::vector<double> pattern;  // values / peak, max element == 1
    double peak = 0.0;            // kW
};

/// Divides a load series by its peak. Throws ZeroPeakError on an all-zero
/// series and std::invalid_argument for a non-load series.
NormalizedLoad normalize_load(const YearSeries& series);

/// File set referenced by a case; paths are taken as-is.
struct CaseFiles {
    std::filesystem::path nodes;
    std::filesystem::path lines;
    std::filesystem::path assets;
    struct Series {
        std::string key;
        SeriesKind kind;
        std::filesystem::path path;
    };
    std::vector<Series> series;
};

/// Technology-mix and modelling knobs; candidate filtering follows the
/// case-study convention of enabling subsets of {diesel, battery, solar,
/// wind}.
struct CaseConfig {
    std::string name = "case";
    std::vector<std::string> candidates{"diesel", "battery", "solar", "wind"};
    double res_curtail_penalty = 0.0;  // currency per kWh spilled
    CurtailmentMode curtailment_mode = CurtailmentMode::binary;
    std::optional<int> polygon_sides;
    double year_days = 365.0;
    double base_mva = 1.0;
    resources::WindTurbineCurve wind_curve;
    resources::SolarArrayModel solar_model;
    double interest_rate = 0.053;
    // capital cost (currency/MW) and lifetime (years) per technology key
    // ("battery", "solar", "wind"); used when an asset row leaves
    // annualized_cost empty
    std::map<std::string, double> capital_cost_per_mw;
    std::map<std::string, double> lifetime_years;
    scenarios::RankingWeights ranking;
};

/// Which representative days to generate and attach to the case.
struct ScenarioSpec {
    int k_days = 1;
    scenarios::Posture posture = scenarios::Posture::nominal;
    std::uint64_t seed = 1;
    int kmeans_max_iter = 200;
    double kmeans_tol = 1e-9;
};

/// Everything parsed from disk but not yet tied to a posture: the case
/// skeleton plus the year-long normalized profiles used for clustering.
struct CaseInputs {
    CaseConfig config;
    Network network;
    std::vector<DieselUnit> diesel;
    std::vector<ResUnit> res_candidates;
    std::vector<BatteryUnit> battery_candidates;
    std::vector<LoadDemand> demands;
    scenarios::ProfileSet profiles;  // 8760-value normalized profiles
};

/// Parses all referenced files, applies the candidate filter, converts raw
/// series to normalized patterns (load / peak, RES power / capacity) and
/// fills in annualized costs where missing.
CaseInputs load_inputs(const CaseFiles& files, const CaseConfig& config);

/// Builds a PlanningCase from parsed inputs and an explicit scenario set.
PlanningCase make_case(const CaseInputs& inputs,
                       std::vector<RepresentativeDay> scenario_set);

/// Full assembly: load_inputs, cluster into spec.k_days representative
/// days, keep the requested posture, validate. Throws CaseValidationError
/// if the result fails validate_case.
PlanningCase assemble_case(const CaseFiles& files, const CaseConfig& config,
                           const ScenarioSpec& spec);

/// Reads a JSON case description (schema in README) into CaseFiles +
/// CaseConfig; relative paths resolve against the JSON file's directory.
std::pair<CaseFiles, CaseConfig> read_case_json(
    const std::filesystem::path& path);

}  // namespace mgplan::ingest

#endif
