#include "mgplan/resources.hpp"

#include <algorithm>
#include <cmath>

namespace mgplan::resources {

double crf(double interest_rate, double lifetime_years) {
    if (!(interest_rate > 0.0))
        throw DomainError("crf: interest rate must be > 0");
    if (!(lifetime_years >= 1.0))
        throw DomainError("crf: lifetime must be >= 1 year");
    const double growth = std::pow(1.0 + interest_rate, lifetime_years);
    return interest_rate * growth / (growth - 1.0);
}

double annualize(const CostModel& model, double capacity_mw) {
    if (model.capital_cost < 0.0)
        throw DomainError("annualize: negative capital cost");
    return model.capital_cost * crf(model.interest_rate, model.lifetime_years) *
           capacity_mw;
}

double hub_speed(double speed_at_measurement, const WindTurbineCurve& curve) {
    return speed_at_measurement *
           std::pow(curve.hub_height / curve.measurement_height,
                    curve.shear_exponent);
}

double wind_power(double speed_at_measurement, const WindTurbineCurve& curve) {
    const double v = hub_speed(speed_at_measurement, curve);
    if (v < curve.cut_in || v >= curve.cut_out) return 0.0;
    if (v >= curve.rated_speed) return curve.rated_power;
    if (curve.law == WindCurveLaw::linear) {
        return curve.rated_power * (v - curve.cut_in) /
               (curve.rated_speed - curve.cut_in);
    }
    const double v3 = v * v * v;
    const double ci3 = curve.cut_in * curve.cut_in * curve.cut_in;
    const double r3 = curve.rated_speed * curve.rated_speed * curve.rated_speed;
    return curve.rated_power * (v3 - ci3) / (r3 - ci3);
}

double solar_power(double irradiance, const SolarArrayModel& model) {
    const double kw = model.efficiency * model.area * irradiance / 1000.0;
    return std::min(model.rated_power, kw);
}

double capacity_factor(std::span<const double> availability) {
    if (availability.empty()) return 0.0;
    double sum = 0.0;
    for (double v : availability) sum += v;
    return sum / static_cast<double>(availability.size());
}

}  // namespace mgplan::resources
