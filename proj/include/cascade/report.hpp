#pragma once

#include <optional>
#include <string>

#include "cascade/cascade.hpp"

namespace cascade {

struct ReportOptions {
    //! Full-precision numbers instead of one-decimal percentages.
    bool precise = false;
    //! Published joint odds shown next to the computed value, e.g. "41%".
    std::optional<std::string> published_joint;
};

//! The cascade as a table of (event, probability, running product) followed
//! by a "Joint odds" row.
std::string report_text(const CascadeModel& model, const ReportOptions& options = {});
std::string report_csv(const CascadeModel& model, const ReportOptions& options = {});

}  // namespace cascade
