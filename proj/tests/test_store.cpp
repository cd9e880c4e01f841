#include <doctest.h>

#include <thread>

#include "cascade/store.hpp"
#include "support.hpp"

using namespace cascade;
namespace fs = std::filesystem;

namespace {

ModelStore user_store(const test::TempDir& dir) { return ModelStore(default_bundled_root(), dir.path()); }

std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out[e.path().string()] = test::read_text(e.path());
    return out;
}

}  // namespace

TEST_CASE("listing and loading") {
    const auto store = test::bundled_store();
    const auto ids = store.list_models();
    CHECK(std::find(ids.begin(), ids.end(), "tagi-2043") != ids.end());
    CHECK(std::find(ids.begin(), ids.end(), "tagi-2100") != ids.end());
    CHECK_THROWS_AS(store.load_model("nope"), NotFoundError);
    CHECK_THROWS_AS(store.load_model("../models/tagi-2043"), NotFoundError);
    CHECK_THROWS_AS(store.load_scenario("0000000000000000"), NotFoundError);
}

TEST_CASE("saved scenarios reload bit-identically") {
    test::TempDir dir;
    auto store = user_store(dir);
    const std::string id = store.save_scenario({"", "tagi-2043", {{"robots", Probability(1.0)}}, "", "no robot limit"});
    const auto loaded = store.load_scenario(id);
    CHECK(loaded.id == id);
    CHECK(loaded.note == "no robot limit");
    CHECK_FALSE(loaded.created_at.empty());
    CHECK(evaluate_cascade(store.resolve(loaded)).joint_odds.value() == doctest::Approx(0.00666).epsilon(1e-3));
    CHECK(serialize(loaded) == test::read_text(dir.path() / "scenarios" / (id + ".scenario")));

    // a second process sees the same id
    ModelStore reopened(default_bundled_root(), dir.path());
    CHECK(reopened.load_scenario(id) == loaded);

    const std::string empty = store.save_scenario({"", "tagi-2043", {}, "", ""});
    CHECK(evaluate_cascade(store.resolve(store.load_scenario(empty))).joint_odds.value() ==
          evaluate_cascade(store.load_model("tagi-2043").model).joint_odds.value());
}

TEST_CASE("scenario save errors") {
    test::TempDir dir;
    auto store = user_store(dir);
    CHECK_THROWS_AS(store.save_scenario({"", "missing-model", {}, "", ""}), NotFoundError);
    CHECK_THROWS_AS(store.save_scenario({"", "tagi-2043", {{"bogus", Probability(0.5)}}, "", ""}), ValidationError);
    ModelStore read_only(default_bundled_root());
    CHECK_THROWS_AS(read_only.save_scenario({"", "tagi-2043", {}, "", ""}), StorageError);

    store.save_scenario({"", "tagi-2043", {{"robots", Probability(0.9)}}, "", "mine"});
    try {
        store.save_scenario({"", "tagi-2043", {{"robots", Probability(0.9)}}, "", "mine"});
        FAIL("duplicate save succeeded");
    } catch (const StorageError& e) {
        CHECK(e.conflict());
    }
    try {
        store.save_scenario({"", "tagi-2043", {{"robots", Probability(0.8)}}, "", "mine"});
        FAIL("duplicate note accepted");
    } catch (const StorageError& e) {
        CHECK(e.conflict());
    }
}

TEST_CASE("concurrent writers of one id: exactly one wins") {
    test::TempDir dir;
    for (int round = 0; round < 5; ++round) {
        std::atomic<int> wins{0};
        std::atomic<int> conflicts{0};
        std::vector<std::thread> threads;
        const ScenarioDocument s{"", "tagi-2043", {{"robots", Probability(0.5 + round * 0.01)}}, "", ""};
        // separate store instances, so only the filesystem arbitrates
        for (int t = 0; t < 8; ++t) {
            threads.emplace_back([&] {
                ModelStore store(default_bundled_root(), dir.path());
                try {
                    store.save_scenario(s);
                    ++wins;
                } catch (const StorageError& e) {
                    if (e.conflict()) ++conflicts;
                }
            });
        }
        for (auto& t : threads) t.join();
        CHECK(wins == 1);
        CHECK(conflicts == 7);
    }
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir.path() / "scenarios")) {
        CHECK(e.path().extension() == ".scenario");
        ++files;
    }
    CHECK(files == 5);
}

TEST_CASE("user root shadows bundled models without changing them") {
    test::TempDir dir;
    const auto before = snapshot(default_bundled_root());
    auto doc = test::bundled_store().load_model("tagi-2043");
    doc.model.factors[0].probability = Probability(0.9);
    fs::create_directories(dir.path() / "models");
    std::ofstream(dir.path() / "models" / "tagi-2043.model") << serialize(doc);
    auto store = user_store(dir);
    CHECK(effective_value(store.load_model("tagi-2043").model.factors[0].probability) == 0.9);
    store.save_scenario({"", "tagi-2043", {{"robots", Probability(1.0)}}, "", ""});
    CHECK(snapshot(default_bundled_root()) == before);
}

TEST_CASE("unreadable documents") {
    test::TempDir dir;
    fs::create_directories(dir.path() / "models");
    std::ofstream(dir.path() / "models" / "broken.model") << "{ \"schema_version\": 1,";
    auto store = user_store(dir);
    CHECK_THROWS_AS(store.load_model("broken"), ParseError);

    fs::create_directories(dir.path() / "scenarios");
    std::ofstream(dir.path() / "scenarios" / "abc.scenario")
        << R"({"id": "def", "base_model": "tagi-2043", "overrides": {}, "created_at": "", "note": ""})";
    CHECK_THROWS_AS(store.load_scenario("abc"), ValidationError);
}

TEST_CASE("bundled extreme-assumptions scenario") {
    const auto store = test::bundled_store();
    const auto s = store.load_scenario("dcd7e1cab667487d");
    CHECK(s.note.starts_with("extreme assumptions"));
    CHECK(scenario_content_id(s) == s.id);
    const double direct = 0.8 * 0.32 * 0.92 * 0.70 * 0.90 * 0.95;
    CHECK(evaluate_cascade(store.resolve(s)).joint_odds.value() == doctest::Approx(direct).epsilon(1e-12));
    CHECK(direct == doctest::Approx(0.1410).epsilon(1e-3));
}
