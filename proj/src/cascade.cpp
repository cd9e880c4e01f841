#include "cascade/cascade.hpp"

#include <mpfr.h>

#include <set>
#include <vector>

namespace cascade {

namespace {

// Each factor contributes at most 53 significant bits, so a running product
// of n doubles is exact at 53 * n bits.
class ExactAccumulator {
public:
    explicit ExactAccumulator(std::size_t factors) {
        mpfr_init2(acc_, static_cast<mpfr_prec_t>(53 * (factors + 1)));
        mpfr_set_d(acc_, 1.0, MPFR_RNDN);
    }
    ~ExactAccumulator() { mpfr_clear(acc_); }
    ExactAccumulator(const ExactAccumulator&) = delete;
    ExactAccumulator& operator=(const ExactAccumulator&) = delete;

    void multiply(double v) { mpfr_mul_d(acc_, acc_, v, MPFR_RNDN); }
    double value() const { return mpfr_get_d(acc_, MPFR_RNDN); }

private:
    mpfr_t acc_;
};

}  // namespace

double exact_product(std::span<const double> values) {
    ExactAccumulator acc(values.size());
    for (double v : values) acc.multiply(v);
    return acc.value();
}

double exact_sum(std::span<const double> values) {
    std::vector<__mpfr_struct> terms(values.size());
    std::vector<mpfr_ptr> ptrs;
    ptrs.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        mpfr_init2(&terms[i], 53);
        mpfr_set_d(&terms[i], values[i], MPFR_RNDN);
        ptrs.push_back(&terms[i]);
    }
    mpfr_t total;
    mpfr_init2(total, 53);
    mpfr_sum(total, ptrs.data(), ptrs.size(), MPFR_RNDN);
    const double out = mpfr_get_d(total, MPFR_RNDN);
    mpfr_clear(total);
    for (auto& t : terms) mpfr_clear(&t);
    return out;
}

std::vector<double> exact_prefix_products(std::span<const double> values) {
    std::vector<double> out;
    out.reserve(values.size());
    ExactAccumulator acc(values.size());
    for (double v : values) {
        acc.multiply(v);
        out.push_back(acc.value());
    }
    return out;
}

std::string to_string(FactorGroup g) {
    switch (g) {
        case FactorGroup::software: return "software";
        case FactorGroup::hardware: return "hardware";
        case FactorGroup::sociopolitical: return "sociopolitical";
    }
    return "?";
}

std::string to_string(FactorSource s) {
    switch (s) {
        case FactorSource::manual: return "manual";
        case FactorSource::grid_derived: return "grid-derived";
        case FactorSource::hazard_derived: return "hazard-derived";
        case FactorSource::econ_derived: return "econ-derived";
    }
    return "?";
}

FactorGroup parse_group(const std::string& text) {
    if (text == "software") return FactorGroup::software;
    if (text == "hardware") return FactorGroup::hardware;
    if (text == "sociopolitical") return FactorGroup::sociopolitical;
    throw ValidationError("unknown factor group '" + text + "'");
}

FactorSource parse_source(const std::string& text) {
    if (text == "manual") return FactorSource::manual;
    if (text == "grid-derived") return FactorSource::grid_derived;
    if (text == "hazard-derived") return FactorSource::hazard_derived;
    if (text == "econ-derived") return FactorSource::econ_derived;
    throw ValidationError("unknown factor source '" + text + "'");
}

const Factor* CascadeModel::find(const std::string& id) const {
    for (const auto& f : factors)
        if (f.id == id) return &f;
    return nullptr;
}

Factor* CascadeModel::find(const std::string& id) {
    for (auto& f : factors)
        if (f.id == id) return &f;
    return nullptr;
}

std::vector<Violation> validate_model(const CascadeModel& model) {
    std::vector<Violation> out;
    if (model.factors.empty()) {
        out.push_back({"", "empty-cascade", "model '" + model.name + "' has no factors"});
    }
    std::set<std::string> seen;
    for (const auto& f : model.factors) {
        if (f.id.empty()) {
            out.push_back({"", "empty-id", "factor '" + f.label + "' has an empty id"});
            continue;
        }
        if (!seen.insert(f.id).second) {
            out.push_back({f.id, "duplicate-id", "factor id '" + f.id + "' appears more than once"});
        }
    }
    return out;
}

void require_valid(const CascadeModel& model) {
    auto violations = validate_model(model);
    if (!violations.empty()) throw ValidationError(violations.front().message);
}

EvaluationReport evaluate_cascade(const CascadeModel& model) {
    require_valid(model);

    std::vector<double> values;
    values.reserve(model.factors.size());
    for (const auto& f : model.factors) values.push_back(effective_value(f.probability));

    auto prefix = exact_prefix_products(values);

    EvaluationReport report;
    report.model_name = model.name;
    report.joint_odds = Probability(prefix.back());
    report.per_factor.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        report.per_factor.push_back({model.factors[i].id, values[i], prefix[i]});
    }
    return report;
}

CascadeModel apply_overrides(const CascadeModel& model, const Overrides& overrides) {
    CascadeModel out = model;
    for (const auto& [id, value] : overrides) {
        Factor* f = out.find(id);
        if (f == nullptr) {
            throw ValidationError("override names unknown factor '" + id + "'");
        }
        f->probability = value;
        f->source = FactorSource::manual;
        f->source_ref.reset();
    }
    return out;
}

}  // namespace cascade
