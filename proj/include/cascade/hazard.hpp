#pragma once

#include <span>
#include <string>
#include <vector>

#include "cascade/probability.hpp"

// Constant-hazard survival arithmetic. Every function assumes the per-year
// risk does not change over the horizon and that distinct events are
// independent.
namespace cascade::hazard {

struct HorizonRisk {
    Probability probability;
    double horizon_years = 1.0;

    friend bool operator==(const HorizonRisk&, const HorizonRisk&) = default;
};

struct DerailmentEvent {
    std::string name;
    HorizonRisk event_risk;
    //! Chance that the event, if it happens, pushes arrival past the deadline.
    Probability delay_given_event;

    friend bool operator==(const DerailmentEvent&, const DerailmentEvent&) = default;
};

HorizonRisk rescale(const HorizonRisk& risk, double target_years);
Probability cumulative_from_annual(Probability annual, double years);
Probability annual_from_cumulative(Probability cumulative, double years);
Probability any_of(std::span<const Probability> risks);
Probability derail_probability(const DerailmentEvent& event);
Probability combined_survival(std::span<const DerailmentEvent> events);

}  // namespace cascade::hazard
