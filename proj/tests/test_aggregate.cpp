#include <doctest.h>

#include "cascade/aggregate.hpp"
#include "oracle.hpp"

using namespace cascade;
using namespace cascade::aggregate;

TEST_CASE("extremize fixed points and identity") {
    for (double a : {0.3, 1.0, 2.0, 17.0}) {
        CHECK(extremize(Probability(0.0), a).value() == 0.0);
        CHECK(extremize(Probability(0.5), a).value() == 0.5);
        CHECK(extremize(Probability(1.0), a).value() == 1.0);
    }
    for (double p : {0.01, 0.3, 0.77}) CHECK(extremize(Probability(p), 1.0).value() == p);
    CHECK(extremize(Probability(0.3), 2.0).value() ==
          doctest::Approx(static_cast<double>(oracle::extremize(0.3L, 2.0L))).epsilon(1e-14));
    CHECK_THROWS_AS(extremize(Probability(0.3), 0.0), ValidationError);
}

TEST_CASE("exponent solver agrees with the closed form") {
    for (auto [in, out] : {std::pair{0.30, 0.15}, std::pair{0.30, 0.10}, std::pair{0.8, 0.95}, std::pair{0.2, 0.3}}) {
        const double a = solve_extremizing_exponent(Probability(in), Probability(out));
        CHECK(a == doctest::Approx(static_cast<double>(oracle::extremizing_exponent(in, out))).epsilon(1e-12));
        CHECK(extremize(Probability(in), a).value() == doctest::Approx(out).epsilon(1e-9));
    }
    CHECK(solve_extremizing_exponent(Probability(0.30), Probability(0.10)) == doctest::Approx(2.594).epsilon(1e-3));
    CHECK(solve_extremizing_exponent(Probability(0.30), Probability(0.30)) == 1.0);
    CHECK_THROWS_AS(solve_extremizing_exponent(Probability(0.3), Probability(0.7)), ValidationError);
    CHECK_THROWS_AS(solve_extremizing_exponent(Probability(0.0), Probability(0.1)), ValidationError);
    CHECK_THROWS_AS(solve_extremizing_exponent(Probability(0.5), Probability(0.1)), ValidationError);
}

TEST_CASE("pooling") {
    ForecastSet clones{std::vector<Probability>(10, Probability(0.7)), std::nullopt};
    CHECK(pool(clones, PoolMethod::mean).value() == 0.7);
    CHECK(pool(clones, PoolMethod::odds_geometric_mean).value() == 0.7);
    ForecastSet pair{{Probability(0.2), Probability(0.8)}, std::nullopt};
    CHECK(pool(pair, PoolMethod::mean).value() == doctest::Approx(0.5));
    CHECK(pool(pair, PoolMethod::odds_geometric_mean).value() == doctest::Approx(0.5));
    ForecastSet weighted{{Probability(0.2), Probability(0.8)}, std::vector<double>{3, 1}};
    CHECK(pool(weighted, PoolMethod::mean).value() == doctest::Approx(0.35));
    ForecastSet edge{{Probability(0.0), Probability(0.8)}, std::nullopt};
    CHECK_THROWS_AS(pool(edge, PoolMethod::odds_geometric_mean), ValidationError);
    CHECK_THROWS_AS(pool(ForecastSet{}, PoolMethod::mean), ValidationError);
    CHECK_THROWS_AS(pool(ForecastSet{{Probability(0.2)}, std::vector<double>{1, 2}}, PoolMethod::mean),
                    ValidationError);
    CHECK(parse_pool_method("odds-geometric-mean") == PoolMethod::odds_geometric_mean);
    CHECK_THROWS_AS(parse_pool_method("median"), ValidationError);
}

TEST_CASE("martingale residuals") {
    EvidencePartition oracle_case{{{Probability(0.8), Probability(0.0)}, {Probability(0.2), Probability(1.0)}}};
    CHECK(martingale_check(Probability(0.2), oracle_case) == doctest::Approx(0.0));
    EvidencePartition none{{{Probability(1.0), Probability(0.37)}}};
    CHECK(martingale_check(Probability(0.37), none) == 0.0);
    EvidencePartition biased{{{Probability(0.5), Probability(0.1)}, {Probability(0.5), Probability(0.4)}}};
    CHECK(martingale_check(Probability(0.2), biased) == doctest::Approx(0.05));
    EvidencePartition leaky{{{Probability(0.5), Probability(0.1)}}};
    CHECK_THROWS_AS(martingale_check(Probability(0.2), leaky), ValidationError);
}

TEST_CASE("partition priors") {
    CHECK(partition_prior(2, 22).value() == doctest::Approx(0.0909).epsilon(1e-3));
    CHECK(partition_prior(1, 20).value() == 0.05);
    CHECK(partition_prior(20, 22).value() == doctest::Approx(0.909).epsilon(1e-3));
    CHECK_THROWS_AS(partition_prior(3, 2), ValidationError);
    CHECK_THROWS_AS(partition_prior(0, 0), ValidationError);
}
