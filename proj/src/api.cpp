#include "cascade/api.hpp"

#include <httplib.h>

#include <iostream>

#include "cascade/hazard.hpp"

namespace cascade {

namespace {

struct RouteNotFound {
    std::string path;
};

Json error_body(const std::string& code, const std::string& message, const std::optional<Json>& detail = {}) {
    Json e{{"code", code}, {"message", message.empty() ? code : message}};
    if (detail) e["detail"] = *detail;
    return {{"error", e}};
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string current;
    for (char ch : path.substr(0, path.find('?'))) {
        if (ch == '/') {
            if (!current.empty()) parts.push_back(std::move(current));
            current.clear();
        } else {
            current += ch;
        }
    }
    if (!current.empty()) parts.push_back(std::move(current));
    return parts;
}

CascadeModel model_with_overrides(const ModelStore& store, ObjectReader& r) {
    CascadeModel model = store.load_model(r.text("model")).model;
    if (const Json* o = r.optional("overrides")) model = apply_overrides(model, overrides_from_json(*o));
    return model;
}

Json evaluate(const ModelStore& store, const Json& req) {
    ObjectReader r(req, "evaluate request");
    const CascadeModel model = model_with_overrides(store, r);
    r.finish();
    return to_json(evaluate_cascade(model));
}

Json solve(const ModelStore& store, const Json& req) {
    ObjectReader r(req, "solve request");
    const CascadeModel model = model_with_overrides(store, r);
    const Probability target(r.number("target"));
    if (const Json* factor = r.optional("factor")) {
        const std::string id = require_string(*factor, "solve request factor");
        r.finish();
        return {{"factor", id}, {"required_value", required_value(model, id, target).value()}};
    }
    FactorSubset subset = FactorSubset::all();
    if (const Json* s = r.optional("subset")) subset = subset_from_json(*s);
    r.finish();
    const MultiplierSolution sol = solve_uniform_multiplier(model, target, subset);
    Json scaled = Json::array();
    for (const auto& f : sol.scaled.factors) scaled.push_back({{"id", f.id}, {"probability", to_json(f.probability)}});
    return {{"multiplier", sol.multiplier}, {"scaled_factors", scaled}, {"achieved_joint", sol.achieved_joint.value()}};
}

Json tornado_endpoint(const ModelStore& store, const Json& req) {
    ObjectReader r(req, "tornado request");
    const CascadeModel model = model_with_overrides(store, r);
    const Json& ranges = r.required("ranges");
    r.finish();
    if (!ranges.is_array()) throw ValidationError("tornado request: 'ranges' must be a list");
    TornadoRanges parsed;
    for (const auto& item : ranges) {
        ObjectReader ir(item, "tornado range");
        const std::string id = ir.text("factor_id");
        const double low = ir.number("low");
        const double high = ir.number("high");
        ir.finish();
        parsed.push_back({id, {low, high}});
    }
    Json entries = Json::array();
    for (const auto& e : tornado(model, parsed)) entries.push_back(to_json(e));
    return {{"entries", entries}};
}

Json grid_endpoint(const ModelStore& store, const Json& req) {
    ObjectReader r(req, "grid request");
    std::optional<ModelDocument> doc;
    if (const Json* m = r.optional("model")) doc = store.load_model(require_string(*m, "grid request model"));
    auto distribution = [&](const std::string& key) {
        const Json& j = r.required(key);
        if (j.is_string()) {
            if (!doc) throw ValidationError("grid request: naming a distribution requires 'model'");
            return doc->distribution(j.get<std::string>());
        }
        return distribution_from_json(j, "grid request " + key);
    };
    const LogBucketDistribution rows = distribution("rows");
    const LogBucketDistribution cols = distribution("cols");
    QualifierRule rule;
    if (const Json* jr = r.optional("rule")) rule = rule_from_json(*jr);
    r.finish();
    return to_json(build_joint_grid(rows, cols, rule));
}

Json rescale_endpoint(const Json& req) {
    ObjectReader r(req, "rescale request");
    const hazard::HorizonRisk risk{Probability(r.number("probability")), r.number("horizon_years")};
    const double target = r.number("target_years");
    r.finish();
    return to_json(hazard::rescale(risk, target));
}

Json extremize_endpoint(const Json& req) {
    ObjectReader r(req, "extremize request");
    const Probability p(r.number("p"));
    const double exponent = r.number("exponent");
    r.finish();
    return {{"p", aggregate::extremize(p, exponent).value()}};
}

Json save_scenario_endpoint(ModelStore& store, const Json& req) {
    ScenarioDocument s = scenario_from_json(req);
    s.id.clear();
    const std::string id = store.save_scenario(s);
    return {{"id", id}, {"scenario", to_json(store.load_scenario(id))}};
}

}  // namespace

Json ApiService::route(const std::string& method, const std::string& path, const Json& req, int& status) const {
    const auto parts = split_path(path);
    if (parts.size() < 2 || parts[0] != "api") throw RouteNotFound{path};
    const std::string& resource = parts[1];
    const bool get = method == "GET";
    const bool post = method == "POST";

    if (resource == "models" && get) {
        if (parts.size() == 2) {
            Json models = Json::array();
            for (const auto& id : store_.list_models()) {
                const ModelDocument doc = store_.load_model(id);
                models.push_back({{"id", id}, {"name", doc.model.name}, {"horizon_year", doc.model.horizon_year}});
            }
            return {{"models", models}};
        }
        if (parts.size() == 3) return to_json(store_.load_model(parts[2]));
    }
    if (resource == "scenarios") {
        if (get && parts.size() == 2) {
            Json list = Json::array();
            for (const auto& s : store_.list_scenarios()) list.push_back(to_json(s));
            return {{"scenarios", list}};
        }
        if (get && parts.size() == 3) return to_json(store_.load_scenario(parts[2]));
        if (post && parts.size() == 2) {
            status = 201;
            return save_scenario_endpoint(store_, req);
        }
    }
    if (post && parts.size() == 2) {
        if (resource == "evaluate") return evaluate(store_, req);
        if (resource == "solve") return solve(store_, req);
        if (resource == "tornado") return tornado_endpoint(store_, req);
    }
    if (post && parts.size() == 3) {
        if (resource == "grids" && parts[2] == "evaluate") return grid_endpoint(store_, req);
        if (resource == "hazard" && parts[2] == "rescale") return rescale_endpoint(req);
        if (resource == "aggregate" && parts[2] == "extremize") return extremize_endpoint(req);
    }
    throw RouteNotFound{path};
}

ApiResponse ApiService::handle(const std::string& method, const std::string& path, const std::string& body) const {
    try {
        Json request = Json::object();
        if (method == "POST") request = parse_json(body.empty() ? "{}" : body);
        int status = 200;
        Json response = route(method, path, request, status);
        return {status, response.dump()};
    } catch (const RouteNotFound& e) {
        return {404, error_body("not-found", "no endpoint " + method + " " + e.path).dump()};
    } catch (const NotFoundError& e) {
        return {404, error_body("not-found", e.what()).dump()};
    } catch (const InfeasibleError& e) {
        return {422, error_body("infeasible", e.what(), Json{{"max_joint_odds", e.max_achievable()}}).dump()};
    } catch (const ValidationError& e) {
        return {400, error_body("bad-request", e.what()).dump()};
    } catch (const StorageError& e) {
        return {500, error_body("storage", e.what(), Json{{"conflict", e.conflict()}}).dump()};
    } catch (const std::exception& e) {
        return {500, error_body("storage", std::string("internal error: ") + e.what()).dump()};
    }
}

void ApiService::serve(const std::string& host, int port, const std::optional<std::filesystem::path>& ui_dir,
                       const std::function<void(int, std::function<void()>)>& on_bound) const {
    httplib::Server server;
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        const ApiResponse r = handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, kDocumentContentType);
    };
    server.Get(R"(/api/.*)", forward);
    server.Post(R"(/api/.*)", forward);
    if (ui_dir && !server.set_mount_point("/", ui_dir->string())) {
        throw StorageError("UI directory '" + ui_dir->string() + "' does not exist");
    }

    int bound = port;
    if (port == 0) {
        bound = server.bind_to_any_port(host);
    } else if (!server.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound < 0) throw StorageError("cannot bind " + host + ":" + std::to_string(port));
    if (on_bound) on_bound(bound, [&server] { server.stop(); });
    server.listen_after_bind();
}

}  // namespace cascade
