#pragma once

#include <string>

namespace cascade::fmt {

//! Percentage with `decimals` places, ties rounded away from zero.
//! percent(0.0039962, 1) == "0.4%".
std::string percent(double probability, int decimals = 1);

//! Scientific notation with `sig` significant figures, ties away from zero,
//! in the "3E+00" style of spreadsheet exports.
std::string sci(double value, int sig = 1);

//! Round-trippable representation (17 significant digits).
std::string precise(double value);

//! Four significant digits, "%.4g".
std::string brief(double value);

//! Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& text);

}  // namespace cascade::fmt
