#include "cascade/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include "cascade/api.hpp"
#include "cascade/format.hpp"
#include "cascade/report.hpp"
#include "cascade/reproduce.hpp"
#include "cascade/store.hpp"

namespace cascade {

namespace {

struct Globals {
    std::string data_dir;
    std::string format = "text";
    bool precise = false;
};

class Session {
public:
    Session(const Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {}

    ModelStore& store() {
        if (!store_) {
            std::optional<std::filesystem::path> user;
            if (!g_.data_dir.empty()) user = g_.data_dir;
            store_ = std::make_unique<ModelStore>(default_bundled_root(), user);
        }
        return *store_;
    }

    const std::string& format() const { return g_.format; }
    bool precise() const { return g_.precise; }
    std::ostream& out() { return out_; }
    std::ostream& err() { return err_; }

    void scalar(double value) {
        if (g_.format == "doc") {
            out_ << Json{{"value", value}}.dump(2) << '\n';
        } else if (g_.format == "csv" || g_.precise) {
            out_ << fmt::precise(value) << '\n';
        } else {
            out_ << fmt::brief(value) << '\n';
        }
    }

    void document(const Json& j) { out_ << j.dump(2) << '\n'; }

    std::string number(double v) const { return g_.precise ? fmt::precise(v) : fmt::brief(v); }

private:
    const Globals& g_;
    std::ostream& out_;
    std::ostream& err_;
    std::unique_ptr<ModelStore> store_;
};

double parse_double(const std::string& text, const std::string& what) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ValidationError(what + ": '" + text + "' is not a number");
    return v;
}

std::pair<std::string, std::string> split_once(const std::string& text, char sep, const std::string& what) {
    const auto pos = text.find(sep);
    if (pos == std::string::npos || pos == 0)
        throw ValidationError(what + ": expected '" + std::string(1, sep) + "' in '" + text + "'");
    return {text.substr(0, pos), text.substr(pos + 1)};
}

Overrides parse_sets(const std::vector<std::string>& sets) {
    Overrides o;
    for (const auto& s : sets) {
        auto [id, value] = split_once(s, '=', "--set");
        if (value == "N/A") {
            o[id] = NotApplicable{};
        } else {
            o[id] = Probability(parse_double(value, "--set " + id));
        }
    }
    return o;
}

// Registers the options shared by commands that act on a model or scenario.
struct ModelArgs {
    std::string model;
    std::string scenario;
    std::vector<std::string> sets;

    void add(CLI::App* cmd, bool allow_sets = true) {
        cmd->add_option("--model", model, "Model id");
        cmd->add_option("--scenario", scenario, "Scenario id to start from");
        if (allow_sets) cmd->add_option("--set", sets, "Override a factor: id=value or id=N/A");
    }

    bool modified() const { return !scenario.empty() || !sets.empty(); }

    // The base model id, plus the overrides implied by --scenario and --set.
    std::pair<std::string, Overrides> resolve(ModelStore& store) const {
        if (!model.empty() && !scenario.empty()) throw ValidationError("give either --model or --scenario, not both");
        std::string base = model;
        Overrides overrides;
        if (!scenario.empty()) {
            ScenarioDocument s = store.load_scenario(scenario);
            base = s.base_model;
            overrides = s.overrides;
        }
        if (base.empty()) throw ValidationError("--model or --scenario is required");
        for (auto& [id, v] : parse_sets(sets)) overrides[id] = v;
        return {base, overrides};
    }

    CascadeModel load(ModelStore& store) const {
        auto [base, overrides] = resolve(store);
        return apply_overrides(store.load_model(base).model, overrides);
    }
};

std::string required_model(const std::string& id) {
    if (id.empty()) throw ValidationError("--model is required");
    return id;
}

void add_evaluate(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("evaluate", "Evaluate a cascade and print the factor table");
    auto args = std::make_shared<ModelArgs>();
    auto note = std::make_shared<std::string>();
    auto save = cmd->add_option("--save-scenario", *note, "Persist the overrides as a scenario with this note");
    save->expected(0, 1);
    args->add(cmd);
    cmd->callback([&s, args, note, save] {
        ModelStore& store = s.store();
        auto [base, overrides] = args->resolve(store);
        const CascadeModel model = apply_overrides(store.load_model(base).model, overrides);
        if (s.format() == "doc") {
            s.document(to_json(evaluate_cascade(model)));
        } else {
            const ReportOptions options{s.precise(), std::nullopt};
            s.out() << (s.format() == "csv" ? report_csv(model, options) : report_text(model, options));
        }
        if (save->count() > 0) {
            const std::string id = store.save_scenario({"", base, overrides, "", *note});
            s.err() << "saved scenario " << id << '\n';
        }
    });
}

void add_export(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("export", "Export a model as a report or document");
    auto args = std::make_shared<ModelArgs>();
    args->add(cmd);
    cmd->callback([&s, args] {
        ModelStore& store = s.store();
        auto [base, overrides] = args->resolve(store);
        ModelDocument doc = store.load_model(base);
        doc.model = apply_overrides(doc.model, overrides);
        if (s.format() == "doc") {
            s.out() << serialize(doc);
            return;
        }
        ReportOptions options{s.precise(), std::nullopt};
        const auto published = doc.annotations.find("published_joint_odds");
        if (!args->modified() && published != doc.annotations.end()) options.published_joint = published->second;
        s.out() << (s.format() == "csv" ? report_csv(doc.model, options) : report_text(doc.model, options));
    });
}

void add_grid(CLI::App& app, Session& s) {
    auto* grid = app.add_subcommand("grid", "Order-of-magnitude grids and scenario expectations");
    grid->require_subcommand(1);

    struct JointArgs {
        std::string model, rows = "compute-needed", cols = "compute-efficiency";
        double threshold = 25.0;
        bool inclusive = false;
    };
    auto j = std::make_shared<JointArgs>();
    auto* joint = grid->add_subcommand("joint", "Cross two distributions and sum the qualifying mass");
    joint->add_option("--model", j->model, "Model id")->required();
    joint->add_option("--rows", j->rows, "Row distribution name")->capture_default_str();
    joint->add_option("--cols", j->cols, "Column distribution name")->capture_default_str();
    joint->add_option("--threshold", j->threshold, "Qualifying cost threshold, dollars per hour")->capture_default_str();
    joint->add_flag("--inclusive", j->inclusive, "Qualify cells at the threshold too");
    joint->callback([&s, j] {
        const ModelDocument doc = s.store().load_model(j->model);
        const JointGrid g =
            build_joint_grid(doc.distribution(j->rows), doc.distribution(j->cols), {j->threshold, !j->inclusive});
        if (s.format() == "doc") {
            s.document(to_json(g));
        } else if (s.format() == "csv") {
            s.out() << grid_to_csv(g);
        } else {
            s.out() << grid_to_text(g);
        }
    });

    struct MassArgs {
        std::string model, dist;
        std::size_t index = 0;
        std::vector<std::string> achievement;
    };
    auto m = std::make_shared<MassArgs>();
    auto* at_least = grid->add_subcommand("at-least", "Mass at a bucket and above");
    at_least->add_option("--model", m->model, "Model id")->required();
    at_least->add_option("--dist", m->dist, "Distribution name")->required();
    at_least->add_option("--index", m->index, "Bucket index, 0-based")->required();
    at_least->callback([&s, m] {
        s.scalar(at_least_mass(s.store().load_model(m->model).distribution(m->dist), m->index).value());
    });

    auto* expectation = grid->add_subcommand("expectation", "Expected achievement over a needs distribution");
    expectation->add_option("--model", m->model, "Model id")->required();
    expectation->add_option("--dist", m->dist, "Needs distribution name")->required();
    expectation->add_option("--achievement", m->achievement, "Achievement profile name")->required()->expected(1);
    expectation->callback([&s, m] {
        const ModelDocument doc = s.store().load_model(m->model);
        s.scalar(scenario_expectation(doc.distribution(m->dist), doc.achievement(m->achievement.at(0))).value());
    });

    auto* linked = grid->add_subcommand("linked", "Joint expectation of two achievement profiles on shared scenarios");
    linked->add_option("--model", m->model, "Model id")->required();
    linked->add_option("--dist", m->dist, "Needs distribution name")->required();
    linked->add_option("--achievement", m->achievement, "Two achievement profile names")->required()->expected(2);
    linked->callback([&s, m] {
        const ModelDocument doc = s.store().load_model(m->model);
        s.scalar(linked_joint_expectation(doc.distribution(m->dist), doc.achievement(m->achievement.at(0)),
                                          doc.achievement(m->achievement.at(1)))
                     .value());
    });
}

void add_hazard(CLI::App& app, Session& s) {
    auto* hz = app.add_subcommand("hazard", "Constant-hazard risk arithmetic");
    hz->require_subcommand(1);

    struct Args {
        double p = 0, from = 0, to = 0, years = 0, delay = 1.0;
        std::vector<double> ps;
        std::string model, event;
        std::vector<std::string> events;
    };
    auto a = std::make_shared<Args>();

    auto* rescale = hz->add_subcommand("rescale", "Risk over one horizon to risk over another");
    rescale->add_option("--p", a->p, "Probability over --from years")->required();
    rescale->add_option("--from", a->from, "Horizon of --p, years")->required();
    rescale->add_option("--to", a->to, "Target horizon, years")->required();
    rescale->callback([&s, a] { s.scalar(hazard::rescale({Probability(a->p), a->from}, a->to).probability.value()); });

    auto* cumulative = hz->add_subcommand("cumulative", "Annual risk to cumulative risk");
    cumulative->add_option("--annual", a->p, "Annual probability")->required();
    cumulative->add_option("--years", a->years, "Horizon, years")->required();
    cumulative->callback([&s, a] { s.scalar(hazard::cumulative_from_annual(Probability(a->p), a->years).value()); });

    auto* annual = hz->add_subcommand("annual", "Cumulative risk to annual risk");
    annual->add_option("--cumulative", a->p, "Cumulative probability")->required();
    annual->add_option("--years", a->years, "Horizon, years")->required();
    annual->callback([&s, a] { s.scalar(hazard::annual_from_cumulative(Probability(a->p), a->years).value()); });

    auto* any = hz->add_subcommand("any-of", "Chance that at least one independent event occurs");
    any->add_option("--p", a->ps, "Event probability (repeatable)")->required();
    any->callback([&s, a] {
        std::vector<Probability> risks;
        for (double p : a->ps) risks.emplace_back(p);
        s.scalar(hazard::any_of(risks).value());
    });

    auto* derail = hz->add_subcommand("derail", "Chance an event happens and delays arrival");
    derail->add_option("--model", a->model, "Model id holding the event");
    derail->add_option("--event", a->event, "Derailment event name");
    derail->add_option("--p", a->p, "Event probability over the horizon");
    derail->add_option("--delay", a->delay, "Chance of delay given the event")->capture_default_str();
    derail->callback([&s, a, derail] {
        if (!a->event.empty()) {
            const ModelDocument doc = s.store().load_model(required_model(a->model));
            s.scalar(hazard::derail_probability(doc.derailment_event(a->event)).value());
        } else {
            if (derail->count("--p") == 0) throw ValidationError("derail needs --event or --p");
            s.scalar(hazard::derail_probability({"", {Probability(a->p), 1.0}, Probability(a->delay)}).value());
        }
    });

    auto* survival = hz->add_subcommand("survival", "Chance no derailment event delays arrival");
    survival->add_option("--model", a->model, "Model id")->required();
    survival->add_option("--event", a->events, "Restrict to these events (repeatable)");
    survival->callback([&s, a] {
        const ModelDocument doc = s.store().load_model(a->model);
        std::vector<hazard::DerailmentEvent> events;
        if (a->events.empty()) {
            events = doc.derailment_events;
        } else {
            for (const auto& name : a->events) events.push_back(doc.derailment_event(name));
        }
        s.scalar(hazard::combined_survival(events).value());
    });
}

// Adds a subcommand computing f over named numeric options, all required.
void add_formula(CLI::App* parent, Session& s, const std::string& name, const std::string& help,
                 std::vector<std::string> flags, std::function<double(const std::vector<double>&)> f) {
    auto* cmd = parent->add_subcommand(name, help);
    auto values = std::make_shared<std::vector<double>>(flags.size());
    for (std::size_t i = 0; i < flags.size(); ++i) cmd->add_option("--" + flags[i], (*values)[i])->required();
    cmd->callback([&s, values, f] { s.scalar(f(*values)); });
}

void add_econ(CLI::App& app, Session& s) {
    auto* ec = app.add_subcommand("econ", "Compute-economics calculators");
    ec->require_subcommand(1);
    using V = const std::vector<double>&;
    add_formula(ec, s, "flops-per-dollar-hour", "Device FLOPS bought per dollar-hour", {"flops", "price"},
                [](V v) { return econ::flops_per_dollar_hour(v[0], v[1]); });
    add_formula(ec, s, "ops-per-dollar", "Operations bought per dollar", {"flops", "price"},
                [](V v) { return econ::ops_per_dollar(v[0], v[1]); });
    add_formula(ec, s, "inference-cost", "Dollars per hour to run one AGI", {"flops-needed", "flops-per-dollar-hour"},
                [](V v) { return econ::inference_cost_per_hour(v[0], v[1]); });
    add_formula(ec, s, "training-cost", "Dollars to train", {"ops", "ops-per-dollar"},
                [](V v) { return econ::training_cost(v[0], v[1]); });
    add_formula(ec, s, "devices", "Concurrent AGIs for a yearly labor demand", {"labor-hours", "utilization"},
                [](V v) { return econ::concurrent_devices(v[0], v[1]); });
    add_formula(ec, s, "training-devices", "Devices to train within the build window",
                {"ops", "device-flops", "years"}, [](V v) { return econ::devices_for_training(v[0], v[1], v[2]); });
    add_formula(ec, s, "cagr", "Growth rate reaching a target rate", {"target", "base", "years"},
                [](V v) { return econ::implied_cagr(v[0], v[1], v[2]); });
    add_formula(ec, s, "growth", "Value after compound growth", {"base", "rate", "years"},
                [](V v) { return econ::project_growth(v[0], v[1], v[2]); });
    add_formula(ec, s, "euv", "Wafers per EUV tool-year", {"wafers-per-hour", "steps", "uptime"},
                [](V v) { return econ::euv_wafer_throughput(v[0], v[1], v[2], econ::kHoursPerYear); });
    add_formula(ec, s, "robot-cost", "Robot cost per working hour", {"price", "lifetime-hours"},
                [](V v) { return econ::robot_amortized_cost(v[0], v[1]); });
    add_formula(ec, s, "robots", "Robots built per year for a labor demand", {"labor-hours", "lifetime-hours"},
                [](V v) { return econ::robots_per_year(v[0], v[1]); });

    struct BillArgs {
        double devices = 0;
        std::string model, device;
    };
    auto b = std::make_shared<BillArgs>();
    auto* bill = ec->add_subcommand("bill", "Wafers and power plants for a device count");
    bill->add_option("--devices", b->devices, "Device count")->required();
    bill->add_option("--model", b->model, "Model id")->required();
    bill->add_option("--device", b->device, "Device name")->required();
    bill->callback([&s, b] {
        const econ::HardwareBill r = econ::hardware_bill(b->devices, s.store().load_model(b->model).device(b->device));
        if (s.format() == "doc") {
            s.document({{"devices", r.devices}, {"wafers", r.wafers}, {"gw_plants", r.gw_plants}});
        } else if (s.format() == "csv") {
            s.out() << "devices,wafers,gw_plants\n"
                    << fmt::precise(r.devices) << ',' << fmt::precise(r.wafers) << ',' << fmt::precise(r.gw_plants)
                    << '\n';
        } else {
            s.out() << "devices    " << s.number(r.devices) << "\nwafers     " << s.number(r.wafers)
                    << "\nGW plants  " << s.number(r.gw_plants) << '\n';
        }
    });

    auto bom_model = std::make_shared<std::string>();
    auto* bom = ec->add_subcommand("bom", "Bill of materials for every workload and device in a model");
    bom->add_option("--model", *bom_model, "Model id")->required();
    bom->callback([&s, bom_model] {
        const ModelDocument doc = s.store().load_model(*bom_model);
        const econ::BillOfMaterials table = econ::bill_of_materials(doc.workloads, doc.devices);
        if (s.format() == "doc") {
            Json cells = Json::array();
            for (const auto& c : table.cells) {
                cells.push_back({{"device", c.device},
                                 {"column", c.column},
                                 {"flops_needed", c.flops_needed},
                                 {"devices", c.bill.devices},
                                 {"wafers", c.bill.wafers},
                                 {"gw_plants", c.bill.gw_plants}});
            }
            s.document({{"cells", cells}});
        } else {
            s.out() << (s.format() == "csv" ? econ::bom_to_csv(table) : econ::bom_to_text(table));
        }
    });
}

void add_aggregate(CLI::App& app, Session& s) {
    auto* ag = app.add_subcommand("aggregate", "Forecast aggregation and extremizing");
    ag->require_subcommand(1);

    struct Args {
        double p = 0, exponent = 1, from = 0, to = 0, prior = 0;
        long favorable = 0, total = 0;
        std::vector<double> ps, weights;
        std::string method = "mean";
        std::vector<std::string> outcomes;
    };
    auto a = std::make_shared<Args>();

    auto* ext = ag->add_subcommand("extremize", "Push a probability away from 0.5");
    ext->add_option("--p", a->p, "Probability")->required();
    ext->add_option("--exponent", a->exponent, "Extremizing exponent")->required();
    ext->callback([&s, a] { s.scalar(aggregate::extremize(Probability(a->p), a->exponent).value()); });

    auto* solve = ag->add_subcommand("solve-exponent", "Exponent that maps one probability onto another");
    solve->add_option("--from", a->from, "Input probability")->required();
    solve->add_option("--to", a->to, "Output probability")->required();
    solve->callback(
        [&s, a] { s.scalar(aggregate::solve_extremizing_exponent(Probability(a->from), Probability(a->to))); });

    auto* pool = ag->add_subcommand("pool", "Combine several forecasts");
    pool->add_option("--p", a->ps, "Forecast (repeatable)")->required();
    pool->add_option("--weight", a->weights, "Weight per forecast (repeatable)");
    pool->add_option("--method", a->method, "mean or odds-geometric-mean")->capture_default_str();
    pool->callback([&s, a] {
        aggregate::ForecastSet set;
        for (double p : a->ps) set.forecasts.emplace_back(p);
        if (!a->weights.empty()) set.weights = a->weights;
        s.scalar(aggregate::pool(set, aggregate::parse_pool_method(a->method)).value());
    });

    auto* mart = ag->add_subcommand("martingale", "Expected posterior minus prior");
    mart->add_option("--prior", a->prior, "Prior probability")->required();
    mart->add_option("--outcome", a->outcomes, "Outcome as probability:posterior (repeatable)")->required();
    mart->callback([&s, a] {
        aggregate::EvidencePartition partition;
        for (const auto& o : a->outcomes) {
            auto [p, post] = split_once(o, ':', "--outcome");
            partition.outcomes.push_back(
                {Probability(parse_double(p, "--outcome")), Probability(parse_double(post, "--outcome"))});
        }
        s.scalar(aggregate::martingale_check(Probability(a->prior), partition));
    });

    auto* part = ag->add_subcommand("partition", "Prior from counting equally likely cases");
    part->add_option("--favorable", a->favorable, "Favorable cases")->required();
    part->add_option("--total", a->total, "Total cases")->required();
    part->callback([&s, a] { s.scalar(aggregate::partition_prior(a->favorable, a->total).value()); });
}

void add_tornado(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("tornado", "One-at-a-time sensitivity of the joint odds");
    auto args = std::make_shared<ModelArgs>();
    auto ranges = std::make_shared<std::vector<std::string>>();
    args->add(cmd);
    cmd->add_option("--range", *ranges, "Factor range id=low:high (repeatable)")->required();
    cmd->callback([&s, args, ranges] {
        const CascadeModel model = args->load(s.store());
        TornadoRanges parsed;
        for (const auto& r : *ranges) {
            auto [id, span] = split_once(r, '=', "--range");
            auto [lo, hi] = split_once(span, ':', "--range " + id);
            parsed.push_back({id, {parse_double(lo, "--range " + id), parse_double(hi, "--range " + id)}});
        }
        const auto entries = tornado(model, parsed);
        if (s.format() == "doc") {
            Json list = Json::array();
            for (const auto& e : entries) list.push_back(to_json(e));
            s.document({{"entries", list}});
            return;
        }
        if (s.format() == "csv") {
            s.out() << tornado_to_csv(entries);
            return;
        }
        auto show = [&s](double v) { return s.precise() ? fmt::precise(v) : fmt::percent(v, 1); };
        std::size_t w = 6;
        for (const auto& e : entries) w = std::max(w, e.factor_id.size());
        char buf[512];
        std::snprintf(buf, sizeof buf, "%-*s  %9s  %9s  %11s  %11s\n", static_cast<int>(w), "factor", "low", "high",
                      "joint low", "joint high");
        s.out() << buf;
        for (const auto& e : entries) {
            std::snprintf(buf, sizeof buf, "%-*s  %9s  %9s  %11s  %11s\n", static_cast<int>(w), e.factor_id.c_str(),
                          show(e.low_input.value()).c_str(), show(e.high_input.value()).c_str(),
                          show(e.joint_low.value()).c_str(), show(e.joint_high.value()).c_str());
            s.out() << buf;
        }
    });
}

void add_solve(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("solve", "Find the change needed to reach a target joint odds");
    auto args = std::make_shared<ModelArgs>();
    struct Args {
        double target = 0;
        std::string subset = "all";
        std::string factor;
    };
    auto a = std::make_shared<Args>();
    args->add(cmd);
    cmd->add_option("--target", a->target, "Target joint odds")->required();
    auto* subset = cmd->add_option("--subset", a->subset, "all, a group name, or ids:a,b,c")->capture_default_str();
    cmd->add_option("--factor", a->factor, "Solve for this single factor instead")->excludes(subset);
    cmd->callback([&s, args, a] {
        const CascadeModel model = args->load(s.store());
        const Probability target(a->target);
        if (!a->factor.empty()) {
            const double v = required_value(model, a->factor, target).value();
            if (s.format() == "doc") {
                s.document({{"factor", a->factor}, {"required_value", v}});
            } else {
                s.scalar(v);
            }
            return;
        }
        const MultiplierSolution sol = solve_uniform_multiplier(model, target, FactorSubset::parse(a->subset));
        if (s.format() == "doc") {
            Json scaled = Json::array();
            for (const auto& f : sol.scaled.factors)
                scaled.push_back({{"id", f.id}, {"probability", to_json(f.probability)}});
            s.document(
                {{"multiplier", sol.multiplier}, {"scaled_factors", scaled}, {"achieved_joint", sol.achieved_joint.value()}});
        } else if (s.format() == "csv") {
            s.out() << "multiplier,achieved_joint\n"
                    << fmt::precise(sol.multiplier) << ',' << fmt::precise(sol.achieved_joint.value()) << '\n';
        } else {
            s.out() << "multiplier      " << s.number(sol.multiplier) << '\n'
                    << "achieved joint  "
                    << (s.precise() ? fmt::precise(sol.achieved_joint.value())
                                    : fmt::percent(sol.achieved_joint.value(), 1))
                    << '\n';
            s.out() << report_text(sol.scaled, {s.precise(), std::nullopt});
        }
    });
}

void add_serve(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("serve", "Run the local HTTP service");
    struct Args {
        std::string host = "127.0.0.1";
        int port = 8000;
        std::string ui;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--host", a->host, "Bind address")->capture_default_str();
    cmd->add_option("--port", a->port, "Port (0 picks a free one)")->capture_default_str()->envname("CASCADE_PORT");
    cmd->add_option("--ui", a->ui, "Directory of static UI files served under /");
    cmd->callback([&s, a] {
        ApiService service(s.store());
        std::optional<std::filesystem::path> ui;
        if (!a->ui.empty()) ui = a->ui;
        service.serve(a->host, a->port, ui, [&s, a](int port, const std::function<void()>&) {
            s.out() << "listening on http://" << a->host << ':' << port << std::endl;
        });
    });
}

void add_reproduce(CLI::App& app, Session& s, int& status) {
    auto* cmd = app.add_subcommand("reproduce", "Recompute the published figures and compare");
    auto only = std::make_shared<std::string>();
    cmd->add_option("--only", *only, "Restrict to one module");
    cmd->callback([&s, &status, only] {
        std::optional<std::string> filter;
        if (!only->empty()) filter = *only;
        const ReproductionReport report = reproduce_paper(s.store(), filter);
        if (s.format() == "doc") {
            Json list = Json::array();
            for (const auto& c : report.checks) {
                list.push_back({{"module", c.module},
                                {"check", c.name},
                                {"computed", c.computed},
                                {"displayed", c.display.render(c.computed)},
                                {"published", c.published},
                                {"result", c.annotation_only() ? "note" : (c.passed() ? "pass" : "fail")},
                                {"note", c.note}});
            }
            s.document({{"checks", list}, {"all_passed", report.all_passed()}});
        } else {
            s.out() << (s.format() == "csv" ? report.to_csv() : report.to_text());
        }
        if (!report.all_passed()) {
            s.err() << report.failures() << " published figure(s) not reproduced\n";
            status = kExitValidation;
        }
    });
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Globals globals;
    Session session(globals, out, err);
    int status = kExitOk;

    CLI::App app{"Conjunctive probability cascade calculator", "cascade"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.add_option("--data-dir", globals.data_dir, "Directory for user models and scenarios")
        ->envname("CASCADE_DATA_DIR");
    app.add_option("--format", globals.format, "Output form: text, csv or doc")->capture_default_str()
        ->check(CLI::IsMember({"text", "csv", "doc"}));
    app.add_flag("--precise", globals.precise, "Print full precision instead of rounded values");

    add_evaluate(app, session);
    add_grid(app, session);
    add_hazard(app, session);
    add_econ(app, session);
    add_aggregate(app, session);
    add_tornado(app, session);
    add_solve(app, session);
    add_export(app, session);
    add_serve(app, session);
    add_reproduce(app, session, status);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const ParseError& e) {
        err << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.what() << '\n';
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NotFoundError& e) {
        err << "not found: " << e.what() << '\n';
        return kExitValidation;
    } catch (const StorageError& e) {
        err << "storage error: " << e.what() << '\n';
        return kExitStorage;
    }
    return status;
}

}  // namespace cascade
