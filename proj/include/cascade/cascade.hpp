#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cascade/probability.hpp"

namespace cascade {

enum class FactorGroup { software, hardware, sociopolitical };

enum class FactorSource { manual, grid_derived, hazard_derived, econ_derived };

std::string to_string(FactorGroup g);
std::string to_string(FactorSource s);
FactorGroup parse_group(const std::string& text);
FactorSource parse_source(const std::string& text);

struct Factor {
    std::string id;
    std::string label;
    FactorGroup group = FactorGroup::software;
    FactorValue probability = Probability::certain();
    std::string rationale;
    FactorSource source = FactorSource::manual;
    //! Names the computation that produced the value, if any.
    std::optional<std::string> source_ref;

    friend bool operator==(const Factor&, const Factor&) = default;
};

//! An ordered conjunctive cascade. Each factor is conditional on every
//! factor before it, so the order is part of the model.
struct CascadeModel {
    std::string name;
    int horizon_year = 0;
    std::vector<Factor> factors;
    std::string notes;

    const Factor* find(const std::string& id) const;
    Factor* find(const std::string& id);

    friend bool operator==(const CascadeModel&, const CascadeModel&) = default;
};

struct FactorContribution {
    std::string id;
    double probability = 1.0;  // value used in the product (1.0 for N/A)
    double cumulative = 1.0;   // running product through this factor
};

struct EvaluationReport {
    std::string model_name;
    Probability joint_odds;
    std::vector<FactorContribution> per_factor;
};

struct Violation {
    std::string factor_id;  // empty for model-level rules
    std::string rule;
    std::string message;
};

using Overrides = std::map<std::string, FactorValue>;

std::vector<Violation> validate_model(const CascadeModel& model);

//! Throws ValidationError built from the first violation, if any.
void require_valid(const CascadeModel& model);

EvaluationReport evaluate_cascade(const CascadeModel& model);

//! Returns a copy with the given factors replaced; overridden factors
//! become manual. Unknown ids throw ValidationError.
CascadeModel apply_overrides(const CascadeModel& model, const Overrides& overrides);

//! Correctly rounded product of the values. The result does not depend on
//! the order of the inputs.
double exact_product(std::span<const double> values);

//! Correctly rounded sum of the values, independent of their order.
double exact_sum(std::span<const double> values);

//! Correctly rounded running products, in input order.
std::vector<double> exact_prefix_products(std::span<const double> values);

}  // namespace cascade
