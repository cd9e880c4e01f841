#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cascade/aggregate.hpp"
#include "cascade/cascade.hpp"
#include "cascade/econ.hpp"
#include "cascade/grid.hpp"
#include "cascade/hazard.hpp"
#include "cascade/sensitivity.hpp"

namespace cascade {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct NamedDistribution {
    std::string name;
    LogBucketDistribution distribution;
    friend bool operator==(const NamedDistribution&, const NamedDistribution&) = default;
};

struct AchievementProfile {
    std::string name;
    std::vector<Probability> values;
    friend bool operator==(const AchievementProfile&, const AchievementProfile&) = default;
};

//! A model file: the cascade plus the inputs the derived factors came from.
struct ModelDocument {
    int schema_version = kSchemaVersion;
    CascadeModel model;
    std::vector<NamedDistribution> distributions;
    std::vector<AchievementProfile> achievement_profiles;
    std::vector<econ::DeviceSpec> devices;
    std::vector<econ::WorkloadSpec> workloads;
    std::vector<hazard::DerailmentEvent> derailment_events;
    std::map<std::string, std::string> annotations;

    const LogBucketDistribution& distribution(const std::string& name) const;
    const std::vector<Probability>& achievement(const std::string& name) const;
    const econ::DeviceSpec& device(const std::string& name) const;
    const econ::WorkloadSpec& workload(const std::string& name) const;
    const hazard::DerailmentEvent& derailment_event(const std::string& name) const;

    friend bool operator==(const ModelDocument&, const ModelDocument&) = default;
};

struct ScenarioDocument {
    std::string id;
    std::string base_model;
    Overrides overrides;
    std::string created_at;  // ISO-8601 UTC
    std::string note;

    friend bool operator==(const ScenarioDocument&, const ScenarioDocument&) = default;
};

//! Parses document text. Malformed text throws ParseError with line and
//! column; schema or invariant violations throw ValidationError.
Json parse_json(std::string_view text);

ModelDocument model_document_from_json(const Json& j);
Json to_json(const ModelDocument& doc);
ModelDocument load_model_document(std::string_view text);
std::string serialize(const ModelDocument& doc);

ScenarioDocument scenario_from_json(const Json& j);
Json to_json(const ScenarioDocument& doc);
std::string serialize(const ScenarioDocument& doc);
//! Hex SHA-256 prefix over base model, overrides and note.
std::string scenario_content_id(const ScenarioDocument& doc);

// Building blocks shared with the HTTP service.
FactorValue factor_value_from_json(const Json& j, const std::string& context);
Json to_json(const FactorValue& v);
Overrides overrides_from_json(const Json& j);
Json to_json(const Overrides& o);
CascadeModel cascade_model_from_json(const Json& j);
Json to_json(const CascadeModel& m);
LogBucketDistribution distribution_from_json(const Json& j, const std::string& context);
Json to_json(const LogBucketDistribution& d);
QualifierRule rule_from_json(const Json& j);
Json to_json(const EvaluationReport& r);
Json to_json(const JointGrid& g);
Json to_json(const TornadoEntry& e);
Json to_json(const hazard::HorizonRisk& r);
FactorSubset subset_from_json(const Json& j);

//! Strict object reader: every key must be consumed before finish().
class ObjectReader {
public:
    ObjectReader(const Json& j, std::string context);

    const Json& required(const std::string& key);
    const Json* optional(const std::string& key);
    double number(const std::string& key);
    std::string text(const std::string& key);
    void finish() const;

    const std::string& context() const { return context_; }

private:
    const Json& j_;
    std::string context_;
    std::vector<std::string> seen_;
};

double require_number(const Json& j, const std::string& context);
std::string require_string(const Json& j, const std::string& context);
bool require_bool(const Json& j, const std::string& context);

}  // namespace cascade
