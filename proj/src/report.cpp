#include "cascade/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "cascade/format.hpp"

namespace cascade {

namespace {

std::string show(double value, bool precise) { return precise ? fmt::precise(value) : fmt::percent(value, 1); }

std::string show_factor(const FactorValue& v, bool precise) {
    return is_applicable(v) ? show(effective_value(v), precise) : "N/A";
}

}  // namespace

std::string report_text(const CascadeModel& model, const ReportOptions& options) {
    const EvaluationReport report = evaluate_cascade(model);
    std::size_t width = std::string("Joint odds").size();
    for (const auto& f : model.factors) width = std::max(width, (f.label.empty() ? f.id : f.label).size());

    std::ostringstream out;
    out << model.name;
    if (model.horizon_year != 0) out << " (by " << model.horizon_year << ")";
    out << '\n';
    const int w = static_cast<int>(width);
    const int cw = options.precise ? 22 : 12;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-*s  %*s  %*s\n", w, "Event", cw, "Probability", cw + 4, "Running product");
    out << buf;
    for (std::size_t i = 0; i < model.factors.size(); ++i) {
        const auto& f = model.factors[i];
        std::snprintf(buf, sizeof buf, "%-*s  %*s  %*s\n", w, (f.label.empty() ? f.id : f.label).c_str(), cw,
                      show_factor(f.probability, options.precise).c_str(), cw + 4,
                      show(report.per_factor[i].cumulative, options.precise).c_str());
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "%-*s  %*s", w, "Joint odds", cw,
                  show(report.joint_odds.value(), options.precise).c_str());
    out << buf;
    if (options.published_joint) out << "  (published " << *options.published_joint << ")";
    out << '\n';
    return out.str();
}

std::string report_csv(const CascadeModel& model, const ReportOptions& options) {
    const EvaluationReport report = evaluate_cascade(model);
    std::ostringstream out;
    out << "event,id,probability,running_product\n";
    for (std::size_t i = 0; i < model.factors.size(); ++i) {
        const auto& f = model.factors[i];
        out << fmt::csv_field(f.label) << ',' << fmt::csv_field(f.id) << ','
            << show_factor(f.probability, options.precise) << ','
            << show(report.per_factor[i].cumulative, options.precise) << '\n';
    }
    out << "Joint odds,," << show(report.joint_odds.value(), options.precise) << ','
        << show(report.joint_odds.value(), options.precise) << '\n';
    return out.str();
}

}  // namespace cascade
