#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cascade/probability.hpp"

namespace cascade::aggregate {

struct ForecastSet {
    std::vector<Probability> forecasts;
    std::optional<std::vector<double>> weights;  // normalized internally
};

struct EvidenceOutcome {
    Probability outcome_probability;
    Probability posterior;
};

struct EvidencePartition {
    std::vector<EvidenceOutcome> outcomes;
};

enum class PoolMethod { mean, odds_geometric_mean };

PoolMethod parse_pool_method(const std::string& text);

//! Power transform on the odds: p^a / (p^a + (1-p)^a). Exponents above 1
//! push forecasts away from 0.5, below 1 toward it.
Probability extremize(Probability p, double exponent);

//! Exponent mapping p_in onto p_out, found by bisection.
double solve_extremizing_exponent(Probability p_in, Probability p_out);

Probability pool(const ForecastSet& set, PoolMethod method);

//! Expected posterior minus prior; zero when updates conserve expectation.
double martingale_check(Probability prior, const EvidencePartition& partition);

Probability partition_prior(long favorable, long total);

}  // namespace cascade::aggregate
