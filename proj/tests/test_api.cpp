#include <doctest.h>

#include <httplib.h>

#include <condition_variable>
#include <thread>

#include "cascade/api.hpp"
#include "support.hpp"

using namespace cascade;

namespace {

struct Fixture {
    test::TempDir dir;
    ModelStore store{default_bundled_root(), dir.path()};
    ApiService api{store};

    Json call(const std::string& method, const std::string& path, const Json& body, int expected_status) {
        const ApiResponse r = api.handle(method, path, body.is_null() ? "" : body.dump());
        CHECK_MESSAGE(r.status == expected_status, r.body);
        return parse_json(r.body);
    }
    Json post(const std::string& path, const Json& body, int status = 200) { return call("POST", path, body, status); }
    Json get(const std::string& path, int status = 200) { return call("GET", path, nullptr, status); }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "model endpoints") {
    const Json list = get("/api/models");
    std::vector<std::string> ids;
    for (const auto& m : list["models"]) ids.push_back(m["id"]);
    CHECK(std::find(ids.begin(), ids.end(), "tagi-2043") != ids.end());
    CHECK(std::find(ids.begin(), ids.end(), "tagi-2100") != ids.end());
    CHECK(get("/api/models/tagi-2043") == to_json(store.load_model("tagi-2043")));
    const Json missing = get("/api/models/nope", 404);
    CHECK(missing["error"]["code"] == "not-found");
    CHECK_FALSE(missing["error"]["message"].get<std::string>().empty());
}

TEST_CASE_FIXTURE(Fixture, "evaluate matches the library") {
    const auto model = store.load_model("tagi-2043").model;
    CHECK(post("/api/evaluate", {{"model", "tagi-2043"}, {"overrides", Json::object()}}) ==
          to_json(evaluate_cascade(model)));
    const Json war = post("/api/evaluate", {{"model", "tagi-2043"}, {"overrides", {{"war-derailment", 1.0}}}});
    CHECK(war == to_json(evaluate_cascade(apply_overrides(model, {{"war-derailment", Probability(1.0)}}))));
    CHECK(war["joint_odds"].get<double>() == doctest::Approx(0.005709).epsilon(1e-3));
    CHECK(post("/api/evaluate", {{"model", "tagi-2043"}, {"overrides", {{"bogus", 0.5}}}}, 400)["error"]["code"] ==
          "bad-request");
    CHECK(post("/api/evaluate", {{"model", "tagi-2043"}, {"extra", 1}}, 400)["error"]["code"] == "bad-request");
    CHECK(api.handle("POST", "/api/evaluate", "{not json").status == 400);
}

TEST_CASE_FIXTURE(Fixture, "solve endpoint") {
    const auto model = store.load_model("tagi-2043").model;
    const double base = evaluate_cascade(model).joint_odds.value();
    CHECK(post("/api/solve", {{"model", "tagi-2043"}, {"target", base}, {"subset", "all"}})["multiplier"] == 1.0);
    const Json ten = post("/api/solve", {{"model", "tagi-2043"}, {"target", 0.10}, {"subset", "all"}});
    const auto lib = solve_uniform_multiplier(model, Probability(0.10), FactorSubset::all());
    CHECK(ten["multiplier"].get<double>() == lib.multiplier);
    CHECK(ten["achieved_joint"].get<double>() == doctest::Approx(0.10).epsilon(1e-6));

    const Json infeasible = post("/api/solve",
                                 {{"model", "tagi-2043"},
                                  {"target", 0.99},
                                  {"subset", {{"ids", {"algorithms", "learning", "inference-cost", "robots",
                                                       "chips-power", "regulation-derailment", "ai-delay-derailment"}}}}},
                                 422);
    CHECK(infeasible["error"]["code"] == "infeasible");
    CHECK(infeasible["error"]["detail"]["max_joint_odds"].get<double>() == doctest::Approx(0.5985).epsilon(1e-12));

    const Json one = post("/api/solve", {{"model", "tagi-2043"}, {"target", 0.01}, {"factor", "inference-cost"}});
    CHECK(one["required_value"].get<double>() == required_value(model, "inference-cost", Probability(0.01)).value());
}

TEST_CASE_FIXTURE(Fixture, "thin transports") {
    const auto doc = store.load_model("tagi-2043");
    const Json t = post("/api/tornado", {{"model", "tagi-2043"},
                                         {"ranges", {{{"factor_id", "inference-cost"}, {"low", 0.05}, {"high", 0.5}}}}});
    CHECK(t["entries"][0] == to_json(tornado(doc.model, {{"inference-cost", {0.05, 0.5}}})[0]));

    const Json g = post("/api/grids/evaluate", {{"model", "tagi-2043"}, {"rows", "compute-needed"}, {"cols", "compute-efficiency"}});
    CHECK(g["qualifying_mass"].get<double>() ==
          build_joint_grid(doc.distribution("compute-needed"), doc.distribution("compute-efficiency"), {}).qualifying_mass.value());
    CHECK(g["qualifying_mass"].get<double>() == doctest::Approx(0.156).epsilon(1e-9));
    const Json inline_grid = post("/api/grids/evaluate", {{"rows", to_json(doc.distribution("compute-needed"))},
                                                          {"cols", to_json(doc.distribution("compute-efficiency"))},
                                                          {"rule", {{"threshold", 25}, {"strict", false}}}});
    CHECK(inline_grid["qualifying_mass"].get<double>() == doctest::Approx(0.256).epsilon(1e-9));

    const Json h = post("/api/hazard/rescale", {{"probability", 0.14}, {"horizon_years", 5}, {"target_years", 15}});
    CHECK(h == to_json(hazard::rescale({Probability(0.14), 5}, 15)));
    CHECK(h["probability"].get<double>() == doctest::Approx(0.3644).epsilon(1e-3));
    CHECK(post("/api/aggregate/extremize", {{"p", 0.5}, {"exponent", 3.0}})["p"] == 0.5);
    CHECK(post("/api/hazard/rescale", {{"probability", 1.0}, {"horizon_years", 5}, {"target_years", 15}}, 400)["error"]["code"] ==
          "bad-request");
    CHECK(get("/api/nothing", 404)["error"]["code"] == "not-found");
    CHECK(api.handle("DELETE", "/api/models", "").status == 404);
}

TEST_CASE_FIXTURE(Fixture, "scenario endpoints") {
    const Json saved = post("/api/scenarios",
                            {{"base_model", "tagi-2043"}, {"overrides", {{"robots", 1.0}}}, {"note", "via api"}}, 201);
    const std::string id = saved["id"];
    CHECK(get("/api/scenarios/" + id) == to_json(store.load_scenario(id)));
    bool listed = false;
    const Json all = get("/api/scenarios");
    for (const auto& s : all["scenarios"]) listed = listed || s["id"] == id;
    CHECK(listed);
    const Json again = post("/api/scenarios",
                            {{"base_model", "tagi-2043"}, {"overrides", {{"robots", 1.0}}}, {"note", "via api"}}, 500);
    CHECK(again["error"]["code"] == "storage");
    CHECK(again["error"]["detail"]["conflict"] == true);
    CHECK(post("/api/scenarios", {{"base_model", "nope"}}, 404)["error"]["code"] == "not-found");
    CHECK(get("/api/scenarios/ffffffffffffffff", 404)["error"]["code"] == "not-found");
}

TEST_CASE_FIXTURE(Fixture, "compute endpoints leave the store untouched") {
    auto files = [&] {
        std::vector<std::string> out;
        for (const auto& e : std::filesystem::recursive_directory_iterator(dir.path())) out.push_back(e.path().string());
        return out;
    };
    const auto before = files();
    post("/api/evaluate", {{"model", "tagi-2043"}, {"overrides", {{"robots", 1.0}}}});
    post("/api/solve", {{"model", "tagi-2043"}, {"target", 0.05}});
    post("/api/tornado", {{"model", "tagi-2043"}, {"ranges", Json::array()}});
    CHECK(files() == before);
}

TEST_CASE_FIXTURE(Fixture, "served over HTTP on loopback") {
    std::mutex m;
    std::condition_variable cv;
    int port = 0;
    std::function<void()> stop;
    std::thread server([&] {
        api.serve("127.0.0.1", 0, std::nullopt, [&](int bound, std::function<void()> stopper) {
            std::lock_guard lock(m);
            port = bound;
            stop = std::move(stopper);
            cv.notify_all();
        });
    });
    {
        std::unique_lock lock(m);
        cv.wait(lock, [&] { return port != 0; });
    }
    httplib::Client client("127.0.0.1", port);
    auto res = client.Post("/api/evaluate", R"({"model": "tagi-2043"})", "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(parse_json(res->body) == to_json(evaluate_cascade(store.load_model("tagi-2043").model)));
    res = client.Get("/api/models/nope");
    REQUIRE(res);
    CHECK(res->status == 404);

    // concurrent clients
    std::vector<std::thread> clients;
    std::atomic<int> ok{0};
    for (int i = 0; i < 8; ++i) {
        clients.emplace_back([&] {
            httplib::Client c("127.0.0.1", port);
            auto r = c.Post("/api/hazard/rescale", R"({"probability": 0.14, "horizon_years": 5, "target_years": 10})",
                            "application/json");
            if (r && r->status == 200) ++ok;
        });
    }
    for (auto& c : clients) c.join();
    CHECK(ok == 8);
    stop();
    server.join();
}
