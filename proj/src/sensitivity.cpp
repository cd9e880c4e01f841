#include "cascade/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cascade/format.hpp"

namespace cascade {

namespace {

constexpr double kJointTolerance = 1e-9;

Factor& require_factor(CascadeModel& model, const std::string& id) {
    Factor* f = model.find(id);
    if (f == nullptr) throw ValidationError("model '" + model.name + "' has no factor '" + id + "'");
    return *f;
}

double joint_of(const CascadeModel& model) { return evaluate_cascade(model).joint_odds.value(); }

}  // namespace

FactorSubset FactorSubset::parse(const std::string& text) {
    if (text == "all") return all();
    if (text.rfind("ids:", 0) == 0) {
        std::vector<std::string> ids;
        std::stringstream in(text.substr(4));
        for (std::string id; std::getline(in, id, ',');)
            if (!id.empty()) ids.push_back(id);
        if (ids.empty()) throw ValidationError("subset 'ids:' lists no factors");
        return of_ids(std::move(ids));
    }
    return of_group(parse_group(text));
}

std::string FactorSubset::describe() const {
    struct Visitor {
        std::string operator()(const All&) const { return "all"; }
        std::string operator()(const Group& g) const { return to_string(g.group); }
        std::string operator()(const Ids& ids) const {
            std::string out = "ids:";
            for (std::size_t i = 0; i < ids.ids.size(); ++i) out += (i ? "," : "") + ids.ids[i];
            return out;
        }
    };
    return std::visit(Visitor{}, selector_);
}

std::vector<bool> FactorSubset::mask(const CascadeModel& model) const {
    std::vector<bool> out(model.factors.size(), false);
    if (std::holds_alternative<All>(selector_)) {
        std::fill(out.begin(), out.end(), true);
    } else if (const auto* g = std::get_if<Group>(&selector_)) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = model.factors[i].group == g->group;
    } else {
        for (const auto& id : std::get<Ids>(selector_).ids) {
            bool found = false;
            for (std::size_t i = 0; i < out.size(); ++i) {
                if (model.factors[i].id == id) {
                    out[i] = true;
                    found = true;
                }
            }
            if (!found) throw ValidationError("subset names unknown factor '" + id + "'");
        }
    }
    return out;
}

CascadeModel remove_factor(const CascadeModel& model, const std::string& id) {
    CascadeModel out = model;
    Factor& f = require_factor(out, id);
    f.probability = Probability::certain();
    f.source = FactorSource::manual;
    f.source_ref = "removed from consideration";
    return out;
}

CascadeModel scale_factors(const CascadeModel& model, double multiplier, const FactorSubset& subset) {
    if (!(multiplier > 0.0) || !std::isfinite(multiplier))
        throw ValidationError("multiplier must be a finite positive number, got " + fmt::precise(multiplier));
    require_valid(model);
    const auto selected = subset.mask(model);
    CascadeModel out = model;
    for (std::size_t i = 0; i < out.factors.size(); ++i) {
        if (!selected[i]) continue;
        auto& f = out.factors[i];
        if (const auto* p = std::get_if<Probability>(&f.probability)) {
            f.probability = Probability(std::min(1.0, multiplier * p->value()));
        }
    }
    return out;
}

std::vector<TornadoEntry> tornado(const CascadeModel& model, const TornadoRanges& ranges) {
    require_valid(model);
    std::vector<TornadoEntry> entries;
    entries.reserve(ranges.size());
    for (const auto& [id, bounds] : ranges) {
        if (model.find(id) == nullptr) throw ValidationError("tornado range names unknown factor '" + id + "'");
        const Probability low(bounds.first);
        const Probability high(bounds.second);
        if (low > high) throw ValidationError("tornado range for '" + id + "' has low above high");
        const double jl = joint_of(apply_overrides(model, {{id, low}}));
        const double jh = joint_of(apply_overrides(model, {{id, high}}));
        entries.push_back({id, low, high, Probability(jl), Probability(jh)});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const TornadoEntry& a, const TornadoEntry& b) { return a.width() > b.width(); });
    return entries;
}

MultiplierSolution solve_uniform_multiplier(const CascadeModel& model, Probability target,
                                            const FactorSubset& subset) {
    require_valid(model);
    const auto selected = subset.mask(model);
    const double current = joint_of(model);
    if (std::fabs(current - target.value()) <= kJointTolerance) return {1.0, model, Probability(current)};
    if (target.value() < current)
        throw ValidationError("target " + fmt::precise(target.value()) + " is below the current joint odds " +
                              fmt::precise(current) + "; multipliers below 1 are not searched");

    // Upper bracket: the smallest nonzero selected factor reaches 1.
    double min_selected = 1.0;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (!selected[i]) continue;
        const double v = effective_value(model.factors[i].probability);
        if (v > 0.0) min_selected = std::min(min_selected, v);
    }
    const double upper = 1.0 / min_selected;
    const CascadeModel saturated = scale_factors(model, upper, subset);
    const double best = joint_of(saturated);
    if (target.value() > best + kJointTolerance) {
        throw InfeasibleError("target " + fmt::precise(target.value()) + " cannot be reached by scaling " +
                                  subset.describe() + "; the maximum achievable joint odds are " + fmt::precise(best),
                              best);
    }

    double lo = 1.0;
    double hi = upper;
    MultiplierSolution sol{hi, saturated, Probability(best)};
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        CascadeModel scaled = scale_factors(model, mid, subset);
        const double joint = joint_of(scaled);
        if (std::fabs(joint - target.value()) <= kJointTolerance) return {mid, std::move(scaled), Probability(joint)};
        if (joint < target.value()) {
            lo = mid;
        } else {
            hi = mid;
            sol = {mid, std::move(scaled), Probability(joint)};
        }
        if (hi - lo <= 1e-15 * hi) break;
    }
    return sol;
}

Probability required_value(const CascadeModel& model, const std::string& factor_id, Probability target) {
    require_valid(model);
    if (model.find(factor_id) == nullptr)
        throw ValidationError("model '" + model.name + "' has no factor '" + factor_id + "'");
    std::vector<double> others;
    for (const auto& f : model.factors)
        if (f.id != factor_id) others.push_back(effective_value(f.probability));
    const double rest = exact_product(others);
    if (rest == 0.0) {
        if (target.value() == 0.0) return Probability::impossible();
        throw InfeasibleError("the other factors multiply to 0; no value of '" + factor_id + "' reaches the target", 0.0);
    }
    const double needed = target.value() / rest;
    if (needed > 1.0) {
        throw InfeasibleError("'" + factor_id + "' would need probability " + fmt::precise(needed) +
                                  " to reach " + fmt::precise(target.value()) + "; at 1.0 the joint odds are only " +
                                  fmt::precise(rest),
                              rest);
    }
    return Probability(needed);
}

std::string tornado_to_csv(const std::vector<TornadoEntry>& entries) {
    std::ostringstream out;
    out << "factor,low,high,joint_low,joint_high\n";
    for (const auto& e : entries) {
        out << fmt::csv_field(e.factor_id) << ',' << fmt::precise(e.low_input.value()) << ','
            << fmt::precise(e.high_input.value()) << ',' << fmt::precise(e.joint_low.value()) << ','
            << fmt::precise(e.joint_high.value()) << '\n';
    }
    return out.str();
}

}  // namespace cascade
