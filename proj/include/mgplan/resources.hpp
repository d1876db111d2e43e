// Physical and financial conversion models: wind power curve with hub-height
// extrapolation, solar irradiance conversion, capacity factors, and
// capital-recovery-factor annualization.

#ifndef MGPLAN_RESOURCES_HPP
#define MGPLAN_RESOURCES_HPP

#include <span>
#include <stdexcept>

namespace mgplan::resources {

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class WindCurveLaw { cubic, linear };

/// Piecewise turbine power curve plus the power-law shear model used to
/// extrapolate measured wind speeds to hub height.
struct WindTurbineCurve {
    double cut_in = 4.0;        // m/s at hub height
    double rated_speed = 12.0;  // m/s at hub height
    double cut_out = 25.0;      // m/s at hub height
    double rated_power = 1800.0;       // kW
    double hub_height = 80.0;          // m
    double measurement_height = 10.0;  // m, height of the wind-speed data
    double shear_exponent = 1.0 / 7.0;
    WindCurveLaw law = WindCurveLaw::cubic;
};

struct SolarArrayModel {
    double efficiency = 0.10;     // fraction of irradiance converted
    double area = 20000.0;        // m^2 of panels
    double rated_power = 1800.0;  // kW cap on output
};

struct CostModel {
    double capital_cost = 0.0;    // currency per MW installed
    double interest_rate = 0.053;  // fraction per year
    double lifetime_years = 1.0;
};

/// Capital recovery factor i(1+i)^y / ((1+i)^y - 1). Strictly decreasing in
/// the lifetime and tends to i as y grows. Throws DomainError for a
/// non-positive rate or a lifetime below one year.
double crf(double interest_rate, double lifetime_years);

/// Equivalent annual cost of `capacity_mw` built under the cost model.
double annualize(const CostModel& model, double capacity_mw);

/// Measured speed extrapolated to hub height via the power law.
double hub_speed(double speed_at_measurement, const WindTurbineCurve& curve);

/// Turbine output in kW for a speed measured at `measurement_height`.
/// Zero below cut-in and at/after cut-out, rated on [rated_speed, cut_out),
/// and the configured interpolation law in between.
double wind_power(double speed_at_measurement, const WindTurbineCurve& curve);

/// Array output in kW for the given irradiance in W/m^2, capped at rated.
double solar_power(double irradiance, const SolarArrayModel& model);

/// Mean of a normalized availability series.
double capacity_factor(std::span<const double> availability);

}  // namespace mgplan::resources

#endif
