#pragma once

// Independent reference computations. Deliberately naive: long double
// arithmetic, direct formulas, exhaustive enumeration. Nothing here calls
// into the library's arithmetic.

#include <cmath>
#include <vector>

namespace oracle {

inline long double product(const std::vector<double>& values) {
    long double p = 1.0L;
    for (double v : values) p *= v;
    return p;
}

struct Outcome {
    long double value;
    long double weight;
};

// Every (row, column) outcome pair; qualifies when row/col is below (or at)
// the threshold.
inline long double enumerate_grid(const std::vector<Outcome>& rows, const std::vector<Outcome>& cols,
                                  long double threshold, bool strict) {
    long double mass = 0.0L;
    for (const auto& r : rows) {
        for (const auto& c : cols) {
            const long double cost = r.value / c.value;
            if (strict ? cost < threshold : cost <= threshold) mass += r.weight * c.weight;
        }
    }
    return mass;
}

inline long double cumulative(long double annual, long double years) { return 1.0L - std::pow(1.0L - annual, years); }

inline long double rescale(long double p, long double from, long double to) {
    return 1.0L - std::pow(1.0L - p, to / from);
}

inline long double logit(long double p) { return std::log(p / (1.0L - p)); }

// For the odds power transform, the exponent is a ratio of log-odds.
inline long double extremizing_exponent(long double in, long double out) { return logit(out) / logit(in); }

inline long double extremize(long double p, long double a) {
    const long double x = std::pow(p, a);
    return x / (x + std::pow(1.0L - p, a));
}

}  // namespace oracle
