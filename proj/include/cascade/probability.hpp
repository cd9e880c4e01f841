#pragma once

#include <compare>
#include <string>
#include <variant>

#include "cascade/errors.hpp"

namespace cascade {

//! A value on the closed unit interval. Construction outside [0, 1] throws.
class Probability {
public:
    constexpr Probability() = default;
    explicit Probability(double value) : value_(value) {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw ValidationError("probability " + std::to_string(value) +
                                  " is outside [0, 1]");
        }
    }

    constexpr double value() const { return value_; }

    static Probability certain() { return Probability(1.0); }
    static Probability impossible() { return Probability(0.0); }

    friend constexpr auto operator<=>(Probability, Probability) = default;

private:
    double value_ = 0.0;
};

//! Marker for a factor that does not apply to a model; multiplies as 1.
struct NotApplicable {
    friend constexpr bool operator==(NotApplicable, NotApplicable) { return true; }
};

using FactorValue = std::variant<Probability, NotApplicable>;

inline double effective_value(const FactorValue& v) {
    if (const auto* p = std::get_if<Probability>(&v)) return p->value();
    return 1.0;
}

inline bool is_applicable(const FactorValue& v) {
    return std::holds_alternative<Probability>(v);
}

}  // namespace cascade
