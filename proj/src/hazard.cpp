#include "cascade/hazard.hpp"

#include <cmath>

#include "cascade/format.hpp"

namespace cascade::hazard {

namespace {

void require_horizon(double years) {
    if (!(years > 0.0) || !std::isfinite(years))
        throw ValidationError("horizon must be a finite positive number of years, got " + fmt::precise(years));
}

void require_finite_hazard(Probability p) {
    if (p.value() >= 1.0) throw ValidationError("a certain event has no finite hazard rate");
}

// 1 - (1 - p)^exponent without cancellation for small p.
double compound(double p, double exponent) {
    return -std::expm1(exponent * std::log1p(-p));
}

}  // namespace

HorizonRisk rescale(const HorizonRisk& risk, double target_years) {
    require_horizon(risk.horizon_years);
    require_horizon(target_years);
    require_finite_hazard(risk.probability);
    if (target_years == risk.horizon_years) return risk;
    return {Probability(compound(risk.probability.value(), target_years / risk.horizon_years)), target_years};
}

Probability cumulative_from_annual(Probability annual, double years) {
    require_horizon(years);
    require_finite_hazard(annual);
    return Probability(compound(annual.value(), years));
}

Probability annual_from_cumulative(Probability cumulative, double years) {
    require_horizon(years);
    require_finite_hazard(cumulative);
    return Probability(compound(cumulative.value(), 1.0 / years));
}

Probability any_of(std::span<const Probability> risks) {
    double none = 1.0;
    for (Probability p : risks) none *= 1.0 - p.value();
    return Probability(1.0 - none);
}

Probability derail_probability(const DerailmentEvent& event) {
    require_horizon(event.event_risk.horizon_years);
    return Probability(event.event_risk.probability.value() * event.delay_given_event.value());
}

Probability combined_survival(std::span<const DerailmentEvent> events) {
    double survival = 1.0;
    for (const auto& e : events) survival *= 1.0 - derail_probability(e).value();
    return Probability(survival);
}

}  // namespace cascade::hazard
