#include <doctest.h>

#include "cascade/document.hpp"
#include "support.hpp"

using namespace cascade;

namespace {

const char* kMinimal = R"({
  "schema_version": 1,
  "model": {
    "name": "tiny",
    "horizon_year": 2050,
    "factors": [
      {"id": "a", "label": "A", "group": "software", "probability": 0.5, "source": "manual"},
      {"id": "b", "label": "B", "group": "hardware", "probability": "N/A", "source": "manual"}
    ]
  }
})";

}  // namespace

TEST_CASE("bundled reference documents") {
    const auto store = test::bundled_store();
    const auto m2043 = store.load_model("tagi-2043");
    CHECK(m2043.schema_version == 1);
    CHECK(evaluate_cascade(m2043.model).joint_odds.value() == doctest::Approx(0.003996).epsilon(1e-3));
    CHECK(m2043.model.factors.size() == 10);
    CHECK(m2043.annotations.at("published_joint_odds") == "0.4%");
    CHECK(m2043.distribution("compute-needed").size() == 10);
    CHECK_THROWS_AS(m2043.distribution("nothing"), NotFoundError);
    const auto m2100 = store.load_model("tagi-2100");
    CHECK(evaluate_cascade(m2100.model).joint_odds.value() == doctest::Approx(0.4069).epsilon(1e-3));
    CHECK(std::holds_alternative<NotApplicable>(m2100.model.find("learning")->probability));
}

TEST_CASE("minimal document and round trip") {
    const auto doc = load_model_document(kMinimal);
    CHECK(doc.model.factors.size() == 2);
    CHECK(load_model_document(serialize(doc)) == doc);
    CHECK(parse_json(serialize(doc)) == parse_json(kMinimal));

    const auto store = test::bundled_store();
    for (const auto& id : store.list_models()) {
        const auto d = store.load_model(id);
        CHECK(load_model_document(serialize(d)) == d);
        CHECK(parse_json(serialize(d)) == parse_json(store.read_model_text(id)));
    }
}

TEST_CASE("range violations name the factor") {
    std::string text = kMinimal;
    text.replace(text.find("0.5"), 3, "1.3");
    CHECK_THROWS_WITH_AS(load_model_document(text), doctest::Contains("'a'"), ValidationError);
}

TEST_CASE("strict schema") {
    std::string text = kMinimal;
    text.replace(text.find("\"horizon_year\""), 0, "\"horizon_yaer\": 1, ");
    CHECK_THROWS_WITH_AS(load_model_document(text), doctest::Contains("horizon_yaer"), ValidationError);
    text = kMinimal;
    text.replace(text.find("\"schema_version\": 1"), 19, "\"schema_version\": 2");
    CHECK_THROWS_AS(load_model_document(text), ValidationError);
    text = kMinimal;
    text.replace(text.find("\"software\""), 10, "\"economic\"");
    CHECK_THROWS_AS(load_model_document(text), ValidationError);
    CHECK_THROWS_AS(load_model_document("[]"), ValidationError);
}

TEST_CASE("parse errors carry line and column") {
    try {
        load_model_document("{\n  \"schema_version\": 1,\n  \"model\": ?\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 12);
    }
}

TEST_CASE("scenario documents") {
    ScenarioDocument s{"", "tagi-2043", {{"robots", Probability(1.0)}, {"learning", NotApplicable{}}},
                       "2024-01-01T00:00:00Z", "robots solved"};
    const std::string id = scenario_content_id(s);
    CHECK(id.size() == 16);
    s.id = id;
    CHECK(scenario_from_json(parse_json(serialize(s))) == s);
    // created_at and id do not feed the content hash
    ScenarioDocument later = s;
    later.created_at = "2030-01-01T00:00:00Z";
    later.id = "x";
    CHECK(scenario_content_id(later) == id);
    later.note = "other";
    CHECK(scenario_content_id(later) != id);
    CHECK_THROWS_AS(scenario_from_json(parse_json(R"({"base_model": "m", "color": 1})")), ValidationError);
    CHECK_THROWS_AS(scenario_from_json(parse_json(R"({"base_model": "m", "overrides": {"a": 2}})")), ValidationError);
}

TEST_CASE("request building blocks") {
    CHECK(subset_from_json("all").describe() == "all");
    CHECK(subset_from_json(parse_json(R"({"group": "hardware"})")).describe() == "hardware");
    CHECK(subset_from_json(parse_json(R"({"ids": ["a", "b"]})")).describe() == "ids:a,b");
    CHECK_THROWS_AS(subset_from_json(parse_json(R"({"ids": []})")), ValidationError);
    const auto rule = rule_from_json(parse_json(R"({"threshold": 10, "strict": false})"));
    CHECK(rule.threshold == 10);
    CHECK_FALSE(rule.strict);
    CHECK(std::holds_alternative<NotApplicable>(factor_value_from_json("N/A", "x")));
    CHECK_THROWS_AS(factor_value_from_json("n/a", "x"), ValidationError);
}
