#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cascade/store.hpp"

namespace cascade {

//! How a computed value is rendered before it is compared with the
//! published figure: the check passes when both strings are identical.
struct Display {
    enum class Kind { percent, sci, fixed };
    Kind kind = Kind::percent;
    int digits = 0;  // decimals for percent/fixed, significant figures for sci

    static Display percent(int decimals) { return {Kind::percent, decimals}; }
    static Display sci(int sig) { return {Kind::sci, sig}; }
    static Display fixed(int decimals) { return {Kind::fixed, decimals}; }

    std::string render(double value) const;
};

struct GoldenCheck {
    std::string module;
    std::string name;
    double computed = 0.0;
    std::string published;  // empty for annotation-only rows
    Display display;
    std::string note;

    bool annotation_only() const { return published.empty(); }
    bool passed() const { return annotation_only() || display.render(computed) == published; }
};

struct ReproductionReport {
    std::vector<GoldenCheck> checks;

    bool all_passed() const;
    std::size_t failures() const;
    std::string to_text() const;
    std::string to_csv() const;
};

inline const std::vector<std::string>& reproduction_modules() {
    static const std::vector<std::string> modules{"cascade", "grid", "econ", "hazard", "aggregate"};
    return modules;
}

//! Recomputes the published figures from the bundled reference models.
//! `only` restricts the run to one module. Unreadable or invalid bundled
//! documents raise StorageError.
ReproductionReport reproduce_paper(const ModelStore& store, const std::optional<std::string>& only = std::nullopt);

}  // namespace cascade
