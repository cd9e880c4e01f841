#include "cascade/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cascade/aggregate.hpp"
#include "cascade/econ.hpp"
#include "cascade/format.hpp"
#include "cascade/grid.hpp"
#include "cascade/hazard.hpp"

namespace cascade {

namespace {

ModelDocument load_bundled(const ModelStore& store, const std::string& id) {
    try {
        return store.load_model(id);
    } catch (const Error& e) {
        throw StorageError(std::string("bundled reference model unusable: ") + e.what());
    }
}

class CheckList {
public:
    explicit CheckList(std::string module) : module_(std::move(module)) {}

    void check(std::string name, double computed, std::string published, Display display, std::string note = {}) {
        out_.push_back({module_, std::move(name), computed, std::move(published), display, std::move(note)});
    }
    void annotate(std::string name, double computed, Display display, std::string note) {
        out_.push_back({module_, std::move(name), computed, {}, display, std::move(note)});
    }
    std::vector<GoldenCheck> take() { return std::move(out_); }

private:
    std::string module_;
    std::vector<GoldenCheck> out_;
};

std::vector<GoldenCheck> cascade_checks(const ModelDocument& m2043, const ModelDocument& m2100) {
    CheckList c("cascade");
    c.check("joint odds by 2043", evaluate_cascade(m2043.model).joint_odds.value(), "0.4%", Display::percent(1));
    c.check("joint odds by 2100", evaluate_cascade(m2100.model).joint_odds.value(), "41%", Display::percent(0),
            "40.7% at one decimal");
    return c.take();
}

std::vector<GoldenCheck> grid_checks(const ModelDocument& doc) {
    CheckList c("grid");
    const auto& needed = doc.distribution("compute-needed");
    const auto& efficiency = doc.distribution("compute-efficiency");
    const double strict = build_joint_grid(needed, efficiency, {25.0, true}).qualifying_mass.value();
    const double inclusive = build_joint_grid(needed, efficiency, {25.0, false}).qualifying_mass.value();
    c.check("inference below $25/hr", strict, "16%", Display::percent(0), "exact cell sum " + fmt::precise(strict));
    c.annotate("inference at or below $25/hr", inclusive, Display::percent(1), "inclusive boundary rule, not used");
    c.check("hardware gain of at least 10x", at_least_mass(efficiency, 1).value(), "98%", Display::percent(0));
    c.check("hardware gain of at least 100x", at_least_mass(efficiency, 2).value(), "48%", Display::percent(0));

    const auto& wafers = doc.distribution("wafers-needed");
    const auto& wafer_odds = doc.achievement("wafer-achievement");
    const auto& power_odds = doc.achievement("power-achievement");
    c.check("wafer production achieved", scenario_expectation(wafers, wafer_odds).value(), "51%",
            Display::percent(0));
    c.check("power build-out achieved", scenario_expectation(doc.distribution("power-needed"), power_odds).value(),
            "57%", Display::percent(0), "\"<1%\" cell taken as 0.5%");
    c.check("chips and power, linked", linked_joint_expectation(wafers, wafer_odds, power_odds).value(), "46%",
            Display::percent(0));
    return c.take();
}

std::vector<GoldenCheck> econ_checks(const ModelDocument& doc) {
    using namespace econ;
    CheckList c("econ");
    const DeviceSpec& h100 = doc.device("H100 SXM");
    const DeviceSpec& x100 = doc.device("X100");
    const WorkloadSpec& lower = doc.workload("lower");
    const WorkloadSpec& upper = doc.workload("upper");
    const double efficiency = flops_per_dollar_hour(h100.useful_flops, h100.price_per_hour.value_or(2.5));

    c.check("H100 FLOPS per dollar-hour at $2.50", efficiency, "4E+14", Display::sci(1));
    c.check("H100 operations per dollar at $4.76", ops_per_dollar(h100.useful_flops, 4.76), "8E+17", Display::sci(1),
            "unrounded 7.56e17");
    c.check("run 1e20 FLOPS today ($/hr)", inference_cost_per_hour(1e20, efficiency), "2.5E+05", Display::sci(2));
    c.check("run 1e21 FLOPS today ($/hr)", inference_cost_per_hour(1e21, efficiency), "2.5E+06", Display::sci(2));
    const double h100_ops = ops_per_dollar(h100.useful_flops, h100.price_per_hour.value_or(2.5));
    c.check("train 1e30 operations today ($)", training_cost(1e30, h100_ops), "7E+11", Display::sci(1));
    c.check("train 1e35 operations today ($)", training_cost(1e35, h100_ops), "7E+16", Display::sci(1));
    c.check("train 1e30 operations on CS-2 ($)", training_cost(1e30, ops_per_dollar(5e15, 1.6e6 / 8760.0)), "1E+13",
            Display::sci(1));
    c.check("robot body amortization ($/hr)", robot_amortized_cost(200000, 20000), "10", Display::fixed(0));
    c.check("robots built per year", robots_per_year(8e11, 20000), "4E+07", Display::sci(1));
    c.check("EUV wafers per tool-year", euv_wafer_throughput(160, 20, 0.84, kHoursPerYear), "6E+04", Display::sci(1),
            "unrounded " + fmt::brief(euv_wafer_throughput(160, 20, 0.84, kHoursPerYear)));

    const auto bom = bill_of_materials({lower, upper}, {h100, x100});
    const auto& h_train = bom.at(h100.name, "training lower").bill;
    const auto& x_train = bom.at(x100.name, "training lower").bill;
    c.check("H100s for lower training", h_train.devices, "1E+08", Display::sci(1));
    c.check("wafers for lower training (H100)", h_train.wafers, "2E+06", Display::sci(1));
    c.check("GW plants for lower training (H100)", h_train.gw_plants, "2E+02", Display::sci(1));
    c.check("X100s for lower training", x_train.devices, "1E+06", Display::sci(1));
    c.check("wafers for lower training (X100)", x_train.wafers, "2E+04", Display::sci(1));
    c.check("GW plants for lower training (X100)", x_train.gw_plants, "2E+00", Display::sci(1));
    c.check("H100s for lower inference", bom.at(h100.name, "inference lower").bill.devices, "2E+09", Display::sci(1));

    const char* growth_labels[] = {"200k wafers/yr", "2M wafers/yr", "20M wafers/yr", "200M wafers/yr"};
    const char* growth_published[] = {"17%", "36%", "58%", "85%"};
    double target = 2e5;
    for (int i = 0; i < 4; ++i, target *= 10) {
        c.check(std::string("15-yr growth to ") + growth_labels[i], implied_cagr(target, 2e4, 15), growth_published[i],
                Display::percent(0));
    }

    c.annotate("AGI instances for 1e12 labor hours", concurrent_devices(1e12, 0.5), Display::sci(2),
               "published \"about 250 million\"");
    c.annotate("inference FLOPS, lower", bom.at(h100.name, "inference lower").flops_needed, Display::sci(2),
               "published 3E+24");
    c.annotate("wafers for lower inference (H100)", bom.at(h100.name, "inference lower").bill.wafers, Display::sci(1),
               "published 3E+07");
    c.annotate("H100s for upper training", bom.at(h100.name, "training upper").bill.devices, Display::sci(2),
               "published 5E+12");
    c.annotate("data-center revenue in 2042 ($/yr)", project_growth(16e9, 0.5, 19), Display::sci(2),
               "published \"$36T/yr\"");
    c.annotate("15 years at 2.1x per 3 years", project_growth(1.0, implied_cagr(2.1, 1.0, 3.0), 15), Display::fixed(1),
               "published \"~38x\"");
    c.annotate("15 years at +50% per 3 years", project_growth(1.0, implied_cagr(1.5, 1.0, 3.0), 15), Display::fixed(2),
               "published \"6.5x\" and \"~7x\"");
    c.annotate("75 EUV tools for one year", 75 * euv_wafer_throughput(160, 20, 0.84, kHoursPerYear), Display::sci(2),
               "published \"~2M wafers\"");
    return c.take();
}

std::vector<GoldenCheck> hazard_checks(const ModelDocument& doc) {
    using namespace hazard;
    CheckList c("hazard");
    const auto cent = cumulative_from_annual(Probability(0.01), 20);
    c.check("once-a-century event within 20 years", cent.value(), "18.2%", Display::percent(1));
    const std::vector<Probability> five(5, cent);
    c.check("any of five such events", any_of(five).value(), "63%", Display::percent(0));
    const HorizonRisk taiwan{Probability(0.14), 5};
    c.check("Taiwan risk over 10 years", rescale(taiwan, 10).probability.value(), "26%", Display::percent(0));
    c.check("Taiwan risk over 15 years", rescale(taiwan, 15).probability.value(), "36%", Display::percent(0));
    const HorizonRisk survey{Probability(0.10), 92};
    c.check("1B-death pandemic annual risk", annual_from_cumulative(survey.probability, 92).value(), "0.1%",
            Display::percent(1));
    c.check("1B-death pandemic within 20 years", rescale(survey, 20).probability.value(), "2.3%", Display::percent(1));
    c.check("extinction pandemic within 20 years", rescale({Probability(0.03), 100}, 20).probability.value(), "0.6%",
            Display::percent(1));

    auto survival = [&](std::initializer_list<const char*> names) {
        std::vector<DerailmentEvent> events;
        for (const char* n : names) events.push_back(doc.derailment_event(n));
        return combined_survival(events).value();
    };
    c.check("no delay from nuclear war", survival({"nuclear-war"}), "93%", Display::percent(0));
    c.check("no delay from war", survival({"war"}), "70%", Display::percent(0));
    c.check("delay from NATO escalation", derail_probability(doc.derailment_event("nato-escalation")).value(), "0.5%",
            Display::percent(1));
    c.check("no delay from pandemics", survival({"natural-pandemic", "engineered-pandemic"}), "90%",
            Display::percent(0));
    c.check("no delay from depression", survival({"depression"}), "95%", Display::percent(0));
    return c.take();
}

std::vector<GoldenCheck> aggregate_checks() {
    using namespace aggregate;
    CheckList c("aggregate");
    const Probability thirty(0.30);
    for (double out : {0.15, 0.10}) {
        const double a = solve_extremizing_exponent(thirty, Probability(out));
        c.check("extremize 30% with exponent " + fmt::brief(a), extremize(thirty, a).value(),
                fmt::percent(out, 0), Display::percent(0));
    }
    c.check("ten identical 70% advisors", pool({std::vector<Probability>(10, Probability(0.7)), {}}, PoolMethod::mean).value(),
            "70%", Display::percent(0));
    c.check("oracle martingale residual",
            martingale_check(Probability(0.2), {{{Probability(0.8), Probability(0.0)}, {Probability(0.2), Probability(1.0)}}}),
            "0.000", Display::fixed(3));
    c.check("neutral prior, 2 of 22", partition_prior(2, 22).value(), "9%", Display::percent(0));
    c.check("neutral prior, 1 of 20", partition_prior(1, 20).value(), "5%", Display::percent(0));
    c.check("inverted listing, 20 of 22", partition_prior(20, 22).value(), "91%", Display::percent(0));
    return c.take();
}

}  // namespace

std::string Display::render(double value) const {
    switch (kind) {
        case Kind::percent: return fmt::percent(value, digits);
        case Kind::sci: return fmt::sci(value, digits);
        case Kind::fixed: {
            const double scale = std::pow(10.0, digits);
            double rounded = std::round(value * scale) / scale;
            if (rounded == 0.0) rounded = 0.0;  // no "-0.000"
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.*f", digits, rounded);
            return buf;
        }
    }
    return {};
}

bool ReproductionReport::all_passed() const { return failures() == 0; }

std::size_t ReproductionReport::failures() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed(); }));
}

std::string ReproductionReport::to_text() const {
    std::ostringstream out;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-10s %-42s %-12s %-10s %-6s %s\n", "module", "check", "computed", "published",
                  "result", "note");
    out << buf;
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, "%-10s %-42s %-12s %-10s %-6s %s\n", c.module.c_str(), c.name.c_str(),
                      c.display.render(c.computed).c_str(), c.annotation_only() ? "-" : c.published.c_str(),
                      c.annotation_only() ? "note" : (c.passed() ? "PASS" : "FAIL"), c.note.c_str());
        out << buf;
    }
    const auto total = std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.annotation_only(); });
    out << (total - static_cast<long>(failures())) << " of " << total << " published figures reproduced\n";
    return out.str();
}

std::string ReproductionReport::to_csv() const {
    std::ostringstream out;
    out << "module,check,computed,displayed,published,result,note\n";
    for (const auto& c : checks) {
        out << c.module << ',' << fmt::csv_field(c.name) << ',' << fmt::precise(c.computed) << ','
            << fmt::csv_field(c.display.render(c.computed)) << ',' << fmt::csv_field(c.published) << ','
            << (c.annotation_only() ? "note" : (c.passed() ? "pass" : "fail")) << ',' << fmt::csv_field(c.note) << '\n';
    }
    return out.str();
}

ReproductionReport reproduce_paper(const ModelStore& store, const std::optional<std::string>& only) {
    const auto& modules = reproduction_modules();
    if (only && std::find(modules.begin(), modules.end(), *only) == modules.end())
        throw ValidationError("unknown module '" + *only + "' (expected cascade, grid, econ, hazard or aggregate)");
    auto wanted = [&](const char* m) { return !only || *only == m; };

    const ModelDocument m2043 = load_bundled(store, "tagi-2043");
    const ModelDocument m2100 = load_bundled(store, "tagi-2100");

    ReproductionReport report;
    auto append = [&](std::vector<GoldenCheck> more) {
        report.checks.insert(report.checks.end(), std::make_move_iterator(more.begin()),
                             std::make_move_iterator(more.end()));
    };
    try {
        if (wanted("cascade")) append(cascade_checks(m2043, m2100));
        if (wanted("grid")) append(grid_checks(m2043));
        if (wanted("econ")) append(econ_checks(m2043));
        if (wanted("hazard")) append(hazard_checks(m2043));
    } catch (const NotFoundError& e) {
        throw StorageError(std::string("bundled reference model is missing an attachment: ") + e.what());
    }
    if (wanted("aggregate")) append(aggregate_checks());
    return report;
}

}  // namespace cascade
