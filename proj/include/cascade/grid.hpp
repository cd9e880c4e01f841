#pragma once

#include <span>
#include <string>
#include <vector>

#include "cascade/probability.hpp"

namespace cascade {

inline constexpr const char* kUnitFlops = "FLOPS";
inline constexpr const char* kUnitFlopsPerDollarHour = "FLOPS per dollar-hour";

//! One order-of-magnitude bucket (lower, upper]. Open tails are
//! single-point buckets (lower == upper) flagged open on one side.
struct MagnitudeBucket {
    std::string label;
    double lower = 0.0;
    double upper = 0.0;
    bool open_low = false;
    bool open_high = false;
    std::string unit;

    //! Upper bound, except for a high-open tail, which uses its lower bound.
    double representative() const { return open_high ? lower : upper; }

    friend bool operator==(const MagnitudeBucket&, const MagnitudeBucket&) = default;
};

struct LogBucketDistribution {
    std::vector<MagnitudeBucket> buckets;
    std::vector<double> weights;

    std::size_t size() const { return buckets.size(); }
    const std::string& unit() const;

    friend bool operator==(const LogBucketDistribution&, const LogBucketDistribution&) = default;
};

//! Throws ValidationError naming the first broken invariant.
void validate_distribution(const LogBucketDistribution& dist);

struct QualifierRule {
    double threshold = 25.0;  // dollars per hour
    bool strict = true;       // cost < threshold; otherwise cost <= threshold

    bool qualifies(double cost) const { return strict ? cost < threshold : cost <= threshold; }
};

struct JointGrid {
    LogBucketDistribution row_dist;
    LogBucketDistribution col_dist;
    QualifierRule rule;
    std::vector<std::vector<double>> cell_cost;
    std::vector<std::vector<double>> cell_mass;
    std::vector<std::vector<bool>> cell_qualifies;
    Probability qualifying_mass;
};

LogBucketDistribution uniform_distribution(std::vector<MagnitudeBucket> buckets);

//! Mass at `bucket_index` and every bucket above it.
Probability at_least_mass(const LogBucketDistribution& dist, std::size_t bucket_index);

//! Rows are compute needed (FLOPS), columns compute efficiency
//! (FLOPS per dollar-hour); a cell's cost is row / column in dollars/hour.
JointGrid build_joint_grid(const LogBucketDistribution& rows, const LogBucketDistribution& cols,
                           const QualifierRule& rule);

Probability scenario_expectation(const LogBucketDistribution& needs,
                                 std::span<const Probability> achievement);

//! Row i of both achievement vectors describes the same scenario.
Probability linked_joint_expectation(const LogBucketDistribution& needs,
                                     std::span<const Probability> achievement_a,
                                     std::span<const Probability> achievement_b);

//! Comma-separated export: a header row of column labels, a row of column
//! weights, one row per compute-need bucket, then the qualifying mass.
std::string grid_to_csv(const JointGrid& grid);

//! Human-readable cost table at one significant figure; '*' marks cells
//! that qualify.
std::string grid_to_text(const JointGrid& grid);

}  // namespace cascade
