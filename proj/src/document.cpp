#include "cascade/document.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cascade/format.hpp"

namespace cascade {

namespace {

template <typename T>
const T& find_named(const std::vector<T>& items, const std::string& name, const char* kind,
                    auto name_of) {
    for (const auto& item : items)
        if (name_of(item) == name) return item;
    throw NotFoundError(std::string("no ") + kind + " named '" + name + "'");
}

template <typename T, typename NameOf>
void require_unique_names(const std::vector<T>& items, const char* kind, NameOf name_of) {
    std::set<std::string> seen;
    for (const auto& item : items) {
        const std::string& name = name_of(item);
        if (name.empty()) throw ValidationError(std::string(kind) + " with an empty name");
        if (!seen.insert(name).second)
            throw ValidationError(std::string(kind) + " name '" + name + "' is used more than once");
    }
}

// Rethrows a validation failure with the location it came from.
template <typename F>
auto in_context(const std::string& context, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ValidationError(context + ": " + e.what());
    }
}

Probability probability_from_json(const Json& j, const std::string& context) {
    return in_context(context, [&] { return Probability(require_number(j, context)); });
}

std::vector<Probability> probabilities_from_json(const Json& j, const std::string& context) {
    if (!j.is_array()) throw ValidationError(context + ": expected a list of probabilities");
    std::vector<Probability> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(probability_from_json(j[i], context + "[" + std::to_string(i) + "]"));
    return out;
}

Factor factor_from_json(const Json& j, std::size_t index) {
    const std::string where = "factor #" + std::to_string(index + 1);
    ObjectReader r(j, where);
    Factor f;
    f.id = r.text("id");
    const std::string ctx = f.id.empty() ? where : "factor '" + f.id + "'";
    f.label = r.text("label");
    f.group = in_context(ctx, [&] { return parse_group(r.text("group")); });
    f.probability = factor_value_from_json(r.required("probability"), ctx);
    if (const Json* v = r.optional("rationale")) f.rationale = require_string(*v, ctx + " rationale");
    if (const Json* v = r.optional("source")) f.source = in_context(ctx, [&] { return parse_source(require_string(*v, ctx)); });
    if (const Json* v = r.optional("source_ref")) f.source_ref = require_string(*v, ctx + " source_ref");
    r.finish();
    return f;
}

Json to_json(const Factor& f) {
    Json j{{"id", f.id}, {"label", f.label}, {"group", to_string(f.group)}, {"probability", to_json(f.probability)},
           {"source", to_string(f.source)}};
    if (!f.rationale.empty()) j["rationale"] = f.rationale;
    if (f.source_ref) j["source_ref"] = *f.source_ref;
    return j;
}

MagnitudeBucket bucket_from_json(const Json& j, const std::string& unit, const std::string& context) {
    ObjectReader r(j, context);
    MagnitudeBucket b;
    b.label = r.text("label");
    b.lower = r.number("lower");
    b.upper = r.number("upper");
    if (const Json* v = r.optional("open_low")) b.open_low = require_bool(*v, context + " open_low");
    if (const Json* v = r.optional("open_high")) b.open_high = require_bool(*v, context + " open_high");
    b.unit = unit;
    r.finish();
    return b;
}

econ::DeviceSpec device_from_json(const Json& j, std::size_t index) {
    ObjectReader r(j, "device #" + std::to_string(index + 1));
    econ::DeviceSpec d;
    d.name = r.text("name");
    d.useful_flops = r.number("useful_flops");
    d.power_draw = r.number("power_draw");
    if (r.optional("price_per_hour")) d.price_per_hour = r.number("price_per_hour");
    const Json& per_wafer = r.required("devices_per_wafer");
    if (!per_wafer.is_number_integer()) throw ValidationError(r.context() + ": devices_per_wafer must be an integer");
    d.devices_per_wafer = per_wafer.get<long>();
    r.finish();
    in_context("device '" + d.name + "'", [&] { econ::validate_device(d); });
    return d;
}

Json to_json(const econ::DeviceSpec& d) {
    Json j{{"name", d.name}, {"useful_flops", d.useful_flops}, {"power_draw", d.power_draw},
           {"devices_per_wafer", d.devices_per_wafer}};
    if (d.price_per_hour) j["price_per_hour"] = *d.price_per_hour;
    return j;
}

econ::WorkloadSpec workload_from_json(const Json& j, std::size_t index) {
    ObjectReader r(j, "workload #" + std::to_string(index + 1));
    econ::WorkloadSpec w;
    w.name = r.text("name");
    w.training_ops = r.number("training_ops");
    w.inference_flops_per_agi = r.number("inference_flops_per_agi");
    w.labor_hours_per_year = r.number("labor_hours_per_year");
    w.utilization = r.number("utilization");
    w.build_years = r.number("build_years");
    r.finish();
    in_context("workload '" + w.name + "'", [&] { econ::validate_workload(w); });
    return w;
}

Json to_json(const econ::WorkloadSpec& w) {
    return {{"name", w.name},
            {"training_ops", w.training_ops},
            {"inference_flops_per_agi", w.inference_flops_per_agi},
            {"labor_hours_per_year", w.labor_hours_per_year},
            {"utilization", w.utilization},
            {"build_years", w.build_years}};
}

hazard::DerailmentEvent event_from_json(const Json& j, std::size_t index) {
    ObjectReader r(j, "derailment event #" + std::to_string(index + 1));
    hazard::DerailmentEvent e;
    e.name = r.text("name");
    const std::string ctx = "derailment event '" + e.name + "'";
    e.event_risk.probability = probability_from_json(r.required("probability"), ctx + " probability");
    e.event_risk.horizon_years = r.number("horizon_years");
    if (!(e.event_risk.horizon_years > 0.0)) throw ValidationError(ctx + ": horizon_years must be positive");
    e.delay_given_event = probability_from_json(r.required("delay_given_event"), ctx + " delay_given_event");
    r.finish();
    return e;
}

Json to_json(const hazard::DerailmentEvent& e) {
    return {{"name", e.name},
            {"probability", e.event_risk.probability.value()},
            {"horizon_years", e.event_risk.horizon_years},
            {"delay_given_event", e.delay_given_event.value()}};
}

Json to_json(const std::vector<Probability>& ps) {
    Json j = Json::array();
    for (Probability p : ps) j.push_back(p.value());
    return j;
}

template <typename T, typename Parse>
std::vector<T> list_from_json(ObjectReader& r, const std::string& key, Parse parse) {
    std::vector<T> out;
    const Json* list = r.optional(key);
    if (list == nullptr) return out;
    if (!list->is_array()) throw ValidationError(r.context() + ": '" + key + "' must be a list");
    for (std::size_t i = 0; i < list->size(); ++i) out.push_back(parse((*list)[i], i));
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

ObjectReader::ObjectReader(const Json& j, std::string context) : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) throw ValidationError(context_ + ": expected an object");
}

const Json* ObjectReader::optional(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.push_back(key);
    return &*it;
}

const Json& ObjectReader::required(const std::string& key) {
    const Json* v = optional(key);
    if (v == nullptr) throw ValidationError(context_ + ": missing required field '" + key + "'");
    return *v;
}

double ObjectReader::number(const std::string& key) { return require_number(required(key), context_ + " " + key); }

std::string ObjectReader::text(const std::string& key) { return require_string(required(key), context_ + " " + key); }

void ObjectReader::finish() const {
    for (const auto& [key, value] : j_.items()) {
        if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
            throw ValidationError(context_ + ": unknown field '" + key + "'");
    }
}

double require_number(const Json& j, const std::string& context) {
    if (!j.is_number()) throw ValidationError(context + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ValidationError(context + ": expected a finite number");
    return v;
}

std::string require_string(const Json& j, const std::string& context) {
    if (!j.is_string()) throw ValidationError(context + ": expected text");
    return j.get<std::string>();
}

bool require_bool(const Json& j, const std::string& context) {
    if (!j.is_boolean()) throw ValidationError(context + ": expected true or false");
    return j.get<bool>();
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character.
        const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i < offset; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                             e.what(),
                         line, column);
    }
}

FactorValue factor_value_from_json(const Json& j, const std::string& context) {
    if (j.is_string()) {
        if (j.get<std::string>() == "N/A") return NotApplicable{};
        throw ValidationError(context + ": probability must be a number or \"N/A\"");
    }
    return probability_from_json(j, context);
}

Json to_json(const FactorValue& v) {
    if (const auto* p = std::get_if<Probability>(&v)) return p->value();
    return "N/A";
}

Overrides overrides_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("overrides: expected an object of factor id to probability");
    Overrides out;
    for (const auto& [id, value] : j.items()) out.emplace(id, factor_value_from_json(value, "override '" + id + "'"));
    return out;
}

Json to_json(const Overrides& o) {
    Json j = Json::object();
    for (const auto& [id, value] : o) j[id] = to_json(value);
    return j;
}

CascadeModel cascade_model_from_json(const Json& j) {
    ObjectReader r(j, "model");
    CascadeModel m;
    m.name = r.text("name");
    const Json& year = r.required("horizon_year");
    if (!year.is_number_integer()) throw ValidationError("model: horizon_year must be an integer");
    m.horizon_year = year.get<int>();
    if (const Json* v = r.optional("notes")) m.notes = require_string(*v, "model notes");
    const Json& factors = r.required("factors");
    if (!factors.is_array()) throw ValidationError("model: 'factors' must be a list");
    for (std::size_t i = 0; i < factors.size(); ++i) m.factors.push_back(factor_from_json(factors[i], i));
    r.finish();
    const auto violations = validate_model(m);
    if (!violations.empty()) throw ValidationError("model '" + m.name + "': " + violations.front().message);
    return m;
}

Json to_json(const CascadeModel& m) {
    Json factors = Json::array();
    for (const auto& f : m.factors) factors.push_back(to_json(f));
    Json j{{"name", m.name}, {"horizon_year", m.horizon_year}, {"factors", factors}};
    if (!m.notes.empty()) j["notes"] = m.notes;
    return j;
}

LogBucketDistribution distribution_from_json(const Json& j, const std::string& context) {
    ObjectReader r(j, context);
    if (const Json* name = r.optional("name")) require_string(*name, context + " name");
    const std::string unit = r.text("unit");
    const Json& buckets = r.required("buckets");
    if (!buckets.is_array()) throw ValidationError(context + ": 'buckets' must be a list");
    LogBucketDistribution d;
    for (std::size_t i = 0; i < buckets.size(); ++i)
        d.buckets.push_back(bucket_from_json(buckets[i], unit, context + " bucket #" + std::to_string(i + 1)));
    const Json& weights = r.required("weights");
    if (!weights.is_array()) throw ValidationError(context + ": 'weights' must be a list");
    for (std::size_t i = 0; i < weights.size(); ++i)
        d.weights.push_back(require_number(weights[i], context + " weight #" + std::to_string(i + 1)));
    r.finish();
    in_context(context, [&] { validate_distribution(d); });
    return d;
}

Json to_json(const LogBucketDistribution& d) {
    Json buckets = Json::array();
    for (const auto& b : d.buckets) {
        Json jb{{"label", b.label}, {"lower", b.lower}, {"upper", b.upper}};
        if (b.open_low) jb["open_low"] = true;
        if (b.open_high) jb["open_high"] = true;
        buckets.push_back(jb);
    }
    return {{"unit", d.unit()}, {"buckets", buckets}, {"weights", d.weights}};
}

QualifierRule rule_from_json(const Json& j) {
    ObjectReader r(j, "rule");
    QualifierRule rule;
    rule.threshold = r.number("threshold");
    if (const Json* v = r.optional("strict")) rule.strict = require_bool(*v, "rule strict");
    r.finish();
    return rule;
}

ModelDocument model_document_from_json(const Json& j) {
    ObjectReader r(j, "document");
    ModelDocument doc;
    const Json& version = r.required("schema_version");
    if (!version.is_number_integer()) throw ValidationError("document: schema_version must be an integer");
    doc.schema_version = version.get<int>();
    if (doc.schema_version != kSchemaVersion)
        throw ValidationError("document: unsupported schema_version " + std::to_string(doc.schema_version));
    doc.model = cascade_model_from_json(r.required("model"));
    doc.distributions = list_from_json<NamedDistribution>(r, "distributions", [](const Json& item, std::size_t i) {
        const std::string ctx = "distribution #" + std::to_string(i + 1);
        if (!item.is_object() || !item.contains("name")) throw ValidationError(ctx + ": missing required field 'name'");
        const std::string name = require_string(item["name"], ctx + " name");
        return NamedDistribution{name, distribution_from_json(item, "distribution '" + name + "'")};
    });
    doc.achievement_profiles =
        list_from_json<AchievementProfile>(r, "achievement_profiles", [](const Json& item, std::size_t i) {
            ObjectReader pr(item, "achievement profile #" + std::to_string(i + 1));
            AchievementProfile p;
            p.name = pr.text("name");
            p.values = probabilities_from_json(pr.required("values"), "achievement profile '" + p.name + "'");
            pr.finish();
            return p;
        });
    doc.devices = list_from_json<econ::DeviceSpec>(r, "devices", device_from_json);
    doc.workloads = list_from_json<econ::WorkloadSpec>(r, "workloads", workload_from_json);
    doc.derailment_events = list_from_json<hazard::DerailmentEvent>(r, "derailment_events", event_from_json);
    if (const Json* notes = r.optional("annotations")) {
        if (!notes->is_object()) throw ValidationError("document: 'annotations' must be an object of text");
        for (const auto& [key, value] : notes->items())
            doc.annotations.emplace(key, require_string(value, "annotation '" + key + "'"));
    }
    r.finish();

    require_unique_names(doc.distributions, "distribution", [](const auto& d) -> const std::string& { return d.name; });
    require_unique_names(doc.achievement_profiles, "achievement profile",
                         [](const auto& p) -> const std::string& { return p.name; });
    require_unique_names(doc.devices, "device", [](const auto& d) -> const std::string& { return d.name; });
    require_unique_names(doc.workloads, "workload", [](const auto& w) -> const std::string& { return w.name; });
    require_unique_names(doc.derailment_events, "derailment event",
                         [](const auto& e) -> const std::string& { return e.name; });
    return doc;
}

Json to_json(const ModelDocument& doc) {
    Json j{{"schema_version", doc.schema_version}, {"model", to_json(doc.model)}};
    if (!doc.distributions.empty()) {
        Json list = Json::array();
        for (const auto& d : doc.distributions) {
            Json jd = to_json(d.distribution);
            jd["name"] = d.name;
            list.push_back(jd);
        }
        j["distributions"] = list;
    }
    if (!doc.achievement_profiles.empty()) {
        Json list = Json::array();
        for (const auto& p : doc.achievement_profiles) list.push_back({{"name", p.name}, {"values", to_json(p.values)}});
        j["achievement_profiles"] = list;
    }
    auto emit = [&j](const char* key, const auto& items) {
        if (items.empty()) return;
        Json list = Json::array();
        for (const auto& item : items) list.push_back(to_json(item));
        j[key] = list;
    };
    emit("devices", doc.devices);
    emit("workloads", doc.workloads);
    emit("derailment_events", doc.derailment_events);
    if (!doc.annotations.empty()) j["annotations"] = doc.annotations;
    return j;
}

ModelDocument load_model_document(std::string_view text) { return model_document_from_json(parse_json(text)); }

std::string serialize(const ModelDocument& doc) { return to_json(doc).dump(2) + "\n"; }

const LogBucketDistribution& ModelDocument::distribution(const std::string& name) const {
    return find_named(distributions, name, "distribution", [](const auto& d) { return d.name; }).distribution;
}

const std::vector<Probability>& ModelDocument::achievement(const std::string& name) const {
    return find_named(achievement_profiles, name, "achievement profile", [](const auto& p) { return p.name; }).values;
}

const econ::DeviceSpec& ModelDocument::device(const std::string& name) const {
    return find_named(devices, name, "device", [](const auto& d) { return d.name; });
}

const econ::WorkloadSpec& ModelDocument::workload(const std::string& name) const {
    return find_named(workloads, name, "workload", [](const auto& w) { return w.name; });
}

const hazard::DerailmentEvent& ModelDocument::derailment_event(const std::string& name) const {
    return find_named(derailment_events, name, "derailment event", [](const auto& e) { return e.name; });
}

ScenarioDocument scenario_from_json(const Json& j) {
    ObjectReader r(j, "scenario");
    ScenarioDocument s;
    if (const Json* v = r.optional("id")) s.id = require_string(*v, "scenario id");
    s.base_model = r.text("base_model");
    if (const Json* v = r.optional("overrides")) s.overrides = overrides_from_json(*v);
    if (const Json* v = r.optional("created_at")) s.created_at = require_string(*v, "scenario created_at");
    if (const Json* v = r.optional("note")) s.note = require_string(*v, "scenario note");
    r.finish();
    if (s.base_model.empty()) throw ValidationError("scenario: base_model is empty");
    return s;
}

Json to_json(const ScenarioDocument& doc) {
    return {{"id", doc.id},
            {"base_model", doc.base_model},
            {"overrides", to_json(doc.overrides)},
            {"created_at", doc.created_at},
            {"note", doc.note}};
}

std::string serialize(const ScenarioDocument& doc) { return to_json(doc).dump(2) + "\n"; }

std::string scenario_content_id(const ScenarioDocument& doc) {
    const Json content{{"base_model", doc.base_model}, {"overrides", to_json(doc.overrides)}, {"note", doc.note}};
    const std::string bytes = content.dump();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw StorageError("could not hash scenario content");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < 8 && i < length; ++i) {
        hex += kHex[digest[i] >> 4];
        hex += kHex[digest[i] & 0xf];
    }
    return hex;
}

Json to_json(const EvaluationReport& r) {
    Json per_factor = Json::array();
    for (const auto& c : r.per_factor)
        per_factor.push_back({{"id", c.id}, {"probability", c.probability}, {"cumulative", c.cumulative}});
    return {{"model_name", r.model_name}, {"joint_odds", r.joint_odds.value()}, {"per_factor", per_factor}};
}

Json to_json(const JointGrid& g) {
    return {{"rows", to_json(g.row_dist)},
            {"cols", to_json(g.col_dist)},
            {"rule", {{"threshold", g.rule.threshold}, {"strict", g.rule.strict}}},
            {"cell_cost", g.cell_cost},
            {"cell_mass", g.cell_mass},
            {"cell_qualifies", g.cell_qualifies},
            {"qualifying_mass", g.qualifying_mass.value()}};
}

Json to_json(const TornadoEntry& e) {
    return {{"factor_id", e.factor_id},
            {"low_input", e.low_input.value()},
            {"high_input", e.high_input.value()},
            {"joint_low", e.joint_low.value()},
            {"joint_high", e.joint_high.value()}};
}

Json to_json(const hazard::HorizonRisk& r) {
    return {{"probability", r.probability.value()}, {"horizon_years", r.horizon_years}};
}

FactorSubset subset_from_json(const Json& j) {
    if (j.is_string()) return FactorSubset::parse(j.get<std::string>());
    ObjectReader r(j, "subset");
    if (const Json* g = r.optional("group")) {
        r.finish();
        return FactorSubset::of_group(parse_group(require_string(*g, "subset group")));
    }
    const Json& ids = r.required("ids");
    r.finish();
    if (!ids.is_array() || ids.empty()) throw ValidationError("subset: 'ids' must be a non-empty list");
    std::vector<std::string> out;
    for (const auto& id : ids) out.push_back(require_string(id, "subset id"));
    return FactorSubset::of_ids(std::move(out));
}

}  // namespace cascade
