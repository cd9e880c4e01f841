#include <doctest.h>

#include <algorithm>

#include "cascade/cascade.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace cascade;

namespace {

const std::vector<double> k2043{0.60, 0.40, 0.16, 0.60, 0.46, 0.70, 0.90, 0.70, 0.90, 0.95};

}  // namespace

TEST_CASE("probability rejects values outside the unit interval") {
    CHECK_THROWS_AS(Probability(-0.01), ValidationError);
    CHECK_THROWS_AS(Probability(1.3), ValidationError);
    CHECK_THROWS_AS(Probability(std::nan("")), ValidationError);
    CHECK(Probability(0.0) == Probability::impossible());
    CHECK(Probability(1.0) == Probability::certain());
}

TEST_CASE("2043 reference cascade") {
    const auto m = test::model_of({0.60, 0.40, 0.16, 0.60, 0.46, 0.70, 0.90, 0.70, 0.90, 0.95});
    const auto r = evaluate_cascade(m);
    CHECK(r.joint_odds.value() == doctest::Approx(static_cast<double>(oracle::product(k2043))).epsilon(1e-15));
    CHECK(r.joint_odds.value() == doctest::Approx(0.003996).epsilon(1e-3));
    REQUIRE(r.per_factor.size() == 10);
    CHECK(r.per_factor.back().cumulative == r.joint_odds.value());
    for (std::size_t i = 1; i < r.per_factor.size(); ++i) CHECK(r.per_factor[i].cumulative <= r.per_factor[i - 1].cumulative);
}

TEST_CASE("2100 cascade treats N/A as 1") {
    auto m = test::model_of({0.85, 1.0, 0.75, 0.90, 0.99, 0.90, 0.95, 0.90, 0.95, 0.98});
    const double with_one = evaluate_cascade(m).joint_odds.value();
    m.factors[1].probability = NotApplicable{};
    const auto r = evaluate_cascade(m);
    CHECK(r.joint_odds.value() == with_one);
    CHECK(r.per_factor[1].probability == 1.0);
    CHECK(r.joint_odds.value() == doctest::Approx(0.4069).epsilon(1e-4));
}

TEST_CASE("identity and annihilation") {
    CHECK(evaluate_cascade(test::model_of({1.0, 1.0, 1.0})).joint_odds.value() == 1.0);
    CHECK(evaluate_cascade(test::model_of({0.5, 0.0, 0.9})).joint_odds.value() == 0.0);
}

TEST_CASE("validation reports each broken rule") {
    CascadeModel empty{"empty", 2043, {}, ""};
    auto v = validate_model(empty);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == "empty-cascade");
    CHECK_THROWS_AS(evaluate_cascade(empty), ValidationError);

    auto dup = test::model_of({0.5, 0.5});
    dup.factors[0].id = "war";
    dup.factors[1].id = "war";
    v = validate_model(dup);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == "duplicate-id");
    CHECK(v[0].factor_id == "war");
    try {
        evaluate_cascade(dup);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("war") != std::string::npos);
    }

    auto blank = test::model_of({0.5});
    blank.factors[0].id.clear();
    CHECK(validate_model(blank).at(0).rule == "empty-id");
    CHECK(validate_model(test::model_of({0.5, 0.2})).empty());
}

TEST_CASE("overrides return a new model and mark factors manual") {
    auto m = test::model_of({0.60, 0.40, 0.16, 0.60, 0.46, 0.70, 0.90, 0.70, 0.90, 0.95});
    m.factors[3].id = "robots";
    m.factors[3].source = FactorSource::grid_derived;
    m.factors[3].source_ref = "grid";
    const auto base = evaluate_cascade(m).joint_odds.value();

    const auto o = apply_overrides(m, {{"robots", Probability(1.0)}});
    CHECK(m.factors[3].source == FactorSource::grid_derived);
    CHECK(o.factors[3].source == FactorSource::manual);
    CHECK_FALSE(o.factors[3].source_ref.has_value());
    CHECK(evaluate_cascade(o).joint_odds.value() == doctest::Approx(base / 0.60).epsilon(1e-14));
    CHECK(evaluate_cascade(o).joint_odds.value() == doctest::Approx(0.006660).epsilon(1e-3));

    CHECK(evaluate_cascade(apply_overrides(m, {})).joint_odds.value() == base);
    CHECK(evaluate_cascade(apply_overrides(m, {{"f0", Probability(0.0)}})).joint_odds.value() == 0.0);
    CHECK_THROWS_WITH_AS(apply_overrides(m, {{"bogus", Probability(0.5)}}), doctest::Contains("bogus"),
                         ValidationError);
}

TEST_CASE("exact products do not depend on order") {
    std::vector<double> v{0.1, 0.7, 0.3, 1e-150, 3e-150, 0.9999999};
    const double forward = exact_product(v);
    std::sort(v.begin(), v.end());
    do {
        CHECK(exact_product(v) == forward);
    } while (std::next_permutation(v.begin(), v.end()));
    CHECK(forward == doctest::Approx(static_cast<double>(oracle::product(v))).epsilon(1e-15));
}

TEST_CASE("exact sums are correctly rounded") {
    CHECK(exact_sum(std::vector<double>{0.5, 0.4, 0.06, 0.02}) == 0.98);
    CHECK(exact_sum(std::vector<double>{1e100, 1.0, -1e100}) == 1.0);
    CHECK(exact_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("group and source names round trip") {
    for (auto g : {FactorGroup::software, FactorGroup::hardware, FactorGroup::sociopolitical})
        CHECK(parse_group(to_string(g)) == g);
    for (auto s : {FactorSource::manual, FactorSource::grid_derived, FactorSource::hazard_derived,
                   FactorSource::econ_derived})
        CHECK(parse_source(to_string(s)) == s);
    CHECK_THROWS_AS(parse_group("economic"), ValidationError);
}
