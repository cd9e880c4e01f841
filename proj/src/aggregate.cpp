#include "cascade/aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "cascade/format.hpp"

namespace cascade::aggregate {

namespace {

double logit(double p) { return std::log(p) - std::log1p(-p); }

double logistic(double x) {
    return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

std::vector<double> normalized_weights(const ForecastSet& set) {
    const std::size_t n = set.forecasts.size();
    if (!set.weights) return std::vector<double>(n, 1.0 / static_cast<double>(n));
    if (set.weights->size() != n)
        throw ValidationError("forecast set has " + std::to_string(n) + " forecasts but " +
                              std::to_string(set.weights->size()) + " weights");
    double total = 0.0;
    for (double w : *set.weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("forecast weights must be finite and positive");
        total += w;
    }
    std::vector<double> out;
    out.reserve(n);
    for (double w : *set.weights) out.push_back(w / total);
    return out;
}

}  // namespace

PoolMethod parse_pool_method(const std::string& text) {
    if (text == "mean") return PoolMethod::mean;
    if (text == "odds-geometric-mean") return PoolMethod::odds_geometric_mean;
    throw ValidationError("unknown pooling method '" + text + "' (expected mean or odds-geometric-mean)");
}

Probability extremize(Probability p, double exponent) {
    if (!(exponent > 0.0) || !std::isfinite(exponent))
        throw ValidationError("extremizing exponent must be a finite positive number, got " + fmt::precise(exponent));
    const double v = p.value();
    if (v == 0.0 || v == 1.0 || v == 0.5 || exponent == 1.0) return p;
    return Probability(logistic(exponent * logit(v)));
}

double solve_extremizing_exponent(Probability p_in, Probability p_out) {
    const double in = p_in.value();
    const double out = p_out.value();
    if (in <= 0.0 || in >= 1.0 || out <= 0.0 || out >= 1.0)
        throw ValidationError("extremizing solver needs probabilities strictly inside (0, 1)");
    if (in == 0.5 || out == 0.5) {
        if (in == out) return 1.0;
        throw ValidationError("0.5 is a fixed point of extremizing and cannot be mapped elsewhere");
    }
    if ((in < 0.5) != (out < 0.5))
        throw ValidationError("extremizing cannot move a forecast across 0.5");
    if (in == out) return 1.0;

    // Distance from 0.5 grows monotonically with the exponent.
    const double goal = std::fabs(out - 0.5);
    auto distance = [&](double a) { return std::fabs(extremize(p_in, a).value() - 0.5); };

    double lo = 1.0;
    double hi = 1.0;
    if (goal > std::fabs(in - 0.5)) {
        while (distance(hi) < goal) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e6) throw ValidationError("extremizing exponent out of range");
        }
    } else {
        while (distance(lo) > goal) {
            hi = lo;
            lo /= 2.0;
            if (lo < 1e-6) throw ValidationError("extremizing exponent out of range");
        }
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (distance(mid) < goal ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Probability pool(const ForecastSet& set, PoolMethod method) {
    if (set.forecasts.empty()) throw ValidationError("forecast set is empty");
    const auto weights = normalized_weights(set);

    // Identical forecasts pool to themselves under either method.
    bool identical = true;
    for (Probability p : set.forecasts) identical = identical && p == set.forecasts.front();
    if (identical) {
        if (method == PoolMethod::odds_geometric_mean) {
            const double v = set.forecasts.front().value();
            if (v == 0.0 || v == 1.0)
                throw ValidationError("odds pooling is undefined for forecasts of exactly 0 or 1");
        }
        return set.forecasts.front();
    }

    double acc = 0.0;
    if (method == PoolMethod::mean) {
        for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * set.forecasts[i].value();
        return Probability(std::clamp(acc, 0.0, 1.0));
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double v = set.forecasts[i].value();
        if (v == 0.0 || v == 1.0)
            throw ValidationError("odds pooling is undefined for forecasts of exactly 0 or 1");
        acc += weights[i] * logit(v);
    }
    return Probability(logistic(acc));
}

double martingale_check(Probability prior, const EvidencePartition& partition) {
    if (partition.outcomes.empty()) throw ValidationError("evidence partition has no outcomes");
    double mass = 0.0;
    double expected = 0.0;
    for (const auto& o : partition.outcomes) {
        mass += o.outcome_probability.value();
        expected += o.outcome_probability.value() * o.posterior.value();
    }
    if (std::fabs(mass - 1.0) > 1e-9)
        throw ValidationError("evidence outcome probabilities sum to " + fmt::precise(mass) + ", not 1");
    return expected - prior.value();
}

Probability partition_prior(long favorable, long total) {
    if (total < 1) throw ValidationError("partition needs at least one outcome");
    if (favorable < 0 || favorable > total)
        throw ValidationError("favorable count must lie between 0 and the total");
    return Probability(static_cast<double>(favorable) / static_cast<double>(total));
}

}  // namespace cascade::aggregate
