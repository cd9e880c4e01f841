#include "cascade/grid.hpp"

#include <cmath>
#include <sstream>

#include "cascade/cascade.hpp"
#include "cascade/format.hpp"

namespace cascade {

namespace {

constexpr double kMassTolerance = 1e-9;

void validate_bucket(const MagnitudeBucket& b) {
    const std::string where = "bucket '" + b.label + "'";
    if (b.open_low && b.open_high) throw ValidationError(where + " cannot be open on both sides");
    if (!(b.lower >= 0.0) || !(b.upper > 0.0) || !std::isfinite(b.upper) || !std::isfinite(b.lower))
        throw ValidationError(where + " needs finite positive bounds");
    if (b.open_low || b.open_high) {
        if (b.lower != b.upper)
            throw ValidationError(where + " is an open tail and must be a single point");
    } else if (!(b.lower < b.upper)) {
        throw ValidationError(where + " needs lower < upper");
    }
}

void require_same_length(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) {
        throw ValidationError(std::string(what) + " has " + std::to_string(got) +
                              " entries; the distribution has " + std::to_string(expected));
    }
}

}  // namespace

const std::string& LogBucketDistribution::unit() const {
    static const std::string none;
    return buckets.empty() ? none : buckets.front().unit;
}

void validate_distribution(const LogBucketDistribution& dist) {
    if (dist.buckets.empty()) throw ValidationError("distribution has no buckets");
    require_same_length(dist.buckets.size(), dist.weights.size(), "weight list");

    double total = 0.0;
    for (std::size_t i = 0; i < dist.buckets.size(); ++i) {
        const auto& b = dist.buckets[i];
        validate_bucket(b);
        if (b.unit != dist.buckets.front().unit)
            throw ValidationError("bucket '" + b.label + "' has unit '" + b.unit + "', expected '" +
                                  dist.buckets.front().unit + "'");
        const double w = dist.weights[i];
        if (!(w >= 0.0 && w <= 1.0))
            throw ValidationError("weight of bucket '" + b.label + "' is outside [0, 1]");
        total += w;
        if (i == 0) continue;
        const auto& prev = dist.buckets[i - 1];
        if (b.open_low) throw ValidationError("only the first bucket may be open below");
        if (prev.open_high) throw ValidationError("only the last bucket may be open above");
        if (b.lower < prev.upper)
            throw ValidationError("bucket '" + b.label + "' overlaps '" + prev.label + "'");
        if (b.representative() < prev.representative())
            throw ValidationError("buckets are not ascending at '" + b.label + "'");
    }
    if (std::fabs(total - 1.0) > kMassTolerance) {
        throw ValidationError("weights sum to " + fmt::precise(total) + ", not 1");
    }
}

LogBucketDistribution uniform_distribution(std::vector<MagnitudeBucket> buckets) {
    if (buckets.empty()) throw ValidationError("uniform distribution needs at least one bucket");
    const double w = 1.0 / static_cast<double>(buckets.size());
    LogBucketDistribution dist{std::move(buckets), {}};
    dist.weights.assign(dist.buckets.size(), w);
    validate_distribution(dist);
    return dist;
}

Probability at_least_mass(const LogBucketDistribution& dist, std::size_t bucket_index) {
    validate_distribution(dist);
    if (bucket_index >= dist.size()) {
        throw ValidationError("bucket index " + std::to_string(bucket_index) + " is out of range (" +
                              std::to_string(dist.size()) + " buckets)");
    }
    if (bucket_index == 0) return Probability::certain();
    const double mass = exact_sum(std::span(dist.weights).subspan(bucket_index));
    return Probability(std::min(mass, 1.0));
}

JointGrid build_joint_grid(const LogBucketDistribution& rows, const LogBucketDistribution& cols,
                           const QualifierRule& rule) {
    validate_distribution(rows);
    validate_distribution(cols);
    if (rows.unit() != kUnitFlops)
        throw ValidationError("grid rows must be in " + std::string(kUnitFlops) + ", got '" + rows.unit() + "'");
    if (cols.unit() != kUnitFlopsPerDollarHour)
        throw ValidationError("grid columns must be in " + std::string(kUnitFlopsPerDollarHour) + ", got '" +
                              cols.unit() + "'");
    if (!(rule.threshold >= 0.0) || !std::isfinite(rule.threshold))
        throw ValidationError("qualification threshold must be a finite non-negative number");

    JointGrid g{rows, cols, rule, {}, {}, {}, Probability::impossible()};
    const std::size_t nr = rows.size();
    const std::size_t nc = cols.size();
    g.cell_cost.assign(nr, std::vector<double>(nc));
    g.cell_mass.assign(nr, std::vector<double>(nc));
    g.cell_qualifies.assign(nr, std::vector<bool>(nc));

    std::vector<double> qualifying;
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            const double cost = rows.buckets[i].representative() / cols.buckets[j].representative();
            const double mass = rows.weights[i] * cols.weights[j];
            const bool ok = rule.qualifies(cost);
            g.cell_cost[i][j] = cost;
            g.cell_mass[i][j] = mass;
            g.cell_qualifies[i][j] = ok;
            if (ok) qualifying.push_back(mass);
        }
    }
    g.qualifying_mass = Probability(std::min(exact_sum(qualifying), 1.0));
    return g;
}

Probability scenario_expectation(const LogBucketDistribution& needs,
                                 std::span<const Probability> achievement) {
    validate_distribution(needs);
    require_same_length(needs.size(), achievement.size(), "achievement list");
    std::vector<double> terms;
    for (std::size_t i = 0; i < needs.size(); ++i) terms.push_back(needs.weights[i] * achievement[i].value());
    return Probability(std::min(exact_sum(terms), 1.0));
}

Probability linked_joint_expectation(const LogBucketDistribution& needs,
                                     std::span<const Probability> achievement_a,
                                     std::span<const Probability> achievement_b) {
    validate_distribution(needs);
    require_same_length(needs.size(), achievement_a.size(), "first achievement list");
    require_same_length(needs.size(), achievement_b.size(), "second achievement list");
    std::vector<double> terms;
    for (std::size_t i = 0; i < needs.size(); ++i)
        terms.push_back(needs.weights[i] * achievement_a[i].value() * achievement_b[i].value());
    return Probability(std::min(exact_sum(terms), 1.0));
}

std::string grid_to_csv(const JointGrid& grid) {
    std::ostringstream out;
    out << "compute_needed,likelihood";
    for (const auto& c : grid.col_dist.buckets) {
        out << ',' << fmt::csv_field("cost " + c.label) << ',' << fmt::csv_field("qualifies " + c.label);
    }
    out << "\ncolumn_likelihood,";
    for (double w : grid.col_dist.weights) out << ',' << fmt::precise(w) << ',';
    out << '\n';
    for (std::size_t i = 0; i < grid.row_dist.size(); ++i) {
        out << fmt::csv_field(grid.row_dist.buckets[i].label) << ',' << fmt::precise(grid.row_dist.weights[i]);
        for (std::size_t j = 0; j < grid.col_dist.size(); ++j) {
            out << ',' << fmt::precise(grid.cell_cost[i][j]) << ',' << (grid.cell_qualifies[i][j] ? "yes" : "no");
        }
        out << '\n';
    }
    out << "qualifying_mass," << fmt::precise(grid.qualifying_mass.value()) << '\n';
    return out.str();
}

std::string grid_to_text(const JointGrid& grid) {
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-22s %-8s", "compute needed", "weight");
    out << buf;
    for (const auto& c : grid.col_dist.buckets) {
        std::snprintf(buf, sizeof buf, " %11s", c.label.c_str());
        out << buf;
    }
    out << '\n';
    std::snprintf(buf, sizeof buf, "%-22s %-8s", "", "");
    out << buf;
    for (double w : grid.col_dist.weights) {
        std::snprintf(buf, sizeof buf, " %11s", fmt::percent(w, 1).c_str());
        out << buf;
    }
    out << '\n';
    for (std::size_t i = 0; i < grid.row_dist.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%-22s %-8s", grid.row_dist.buckets[i].label.c_str(),
                      fmt::percent(grid.row_dist.weights[i], 1).c_str());
        out << buf;
        for (std::size_t j = 0; j < grid.col_dist.size(); ++j) {
            const std::string cell = fmt::sci(grid.cell_cost[i][j], 1) + (grid.cell_qualifies[i][j] ? "*" : " ");
            std::snprintf(buf, sizeof buf, " %11s", cell.c_str());
            out << buf;
        }
        out << '\n';
    }
    out << "qualifying mass (cost " << (grid.rule.strict ? "< $" : "<= $") << fmt::brief(grid.rule.threshold)
        << "/hr): " << fmt::percent(grid.qualifying_mass.value(), 1) << '\n';
    return out.str();
}

}  // namespace cascade
