#include "cascade/format.hpp"

#include <cmath>
#include <cstdio>

namespace cascade::fmt {

std::string percent(double probability, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const double rounded = std::round(probability * 100.0 * scale) / scale;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f%%", decimals, rounded == 0.0 ? 0.0 : rounded);
    return buf;
}

std::string sci(double value, int sig) {
    if (value == 0.0) return sig > 1 ? "0." + std::string(sig - 1, '0') + "E+00" : "0E+00";
    if (!std::isfinite(value)) return std::isnan(value) ? "NaN" : (value > 0 ? "Inf" : "-Inf");
    const bool negative = value < 0;
    double mag = std::fabs(value);
    int exponent = static_cast<int>(std::floor(std::log10(mag)));
    double mantissa = exponent >= 0 ? mag / std::pow(10.0, exponent) : mag * std::pow(10.0, -exponent);
    // log10 can land one decade off near exact powers of ten
    if (mantissa >= 10.0) {
        mantissa /= 10.0;
        ++exponent;
    } else if (mantissa < 1.0) {
        mantissa *= 10.0;
        --exponent;
    }
    const double step = std::pow(10.0, sig - 1);
    mantissa = std::round(mantissa * step) / step;
    if (mantissa >= 10.0) {
        mantissa /= 10.0;
        ++exponent;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.*fE%c%02d", negative ? "-" : "", sig - 1, mantissa,
                  exponent < 0 ? '-' : '+', std::abs(exponent));
    return buf;
}

std::string precise(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string brief(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", value);
    return buf;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace cascade::fmt
