#include "exmine/format.hpp"

#include <cfenv>
#include <cmath>
#include <cstdio>

namespace exmine {

std::string format_number(double value) {
    if (!std::isfinite(value)) return "NA";
    if (value == 0.0) return "0";  // folds -0
    const int saved = std::fegetround();
    std::fesetround(FE_TONEAREST);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    std::fesetround(saved);
    return buf;
}

std::string format_number(std::optional<double> value) {
    return value ? format_number(*value) : std::string("NA");
}

std::optional<DurationUnit> parse_duration_unit(std::string_view name) {
    if (name == "seconds") return DurationUnit::Seconds;
    if (name == "minutes") return DurationUnit::Minutes;
    if (name == "hours") return DurationUnit::Hours;
    if (name == "days") return DurationUnit::Days;
    if (name == "weeks") return DurationUnit::Weeks;
    return std::nullopt;
}

std::string_view to_string(DurationUnit unit) {
    switch (unit) {
        case DurationUnit::Seconds: return "seconds";
        case DurationUnit::Minutes: return "minutes";
        case DurationUnit::Hours: return "hours";
        case DurationUnit::Days: return "days";
        case DurationUnit::Weeks: return "weeks";
    }
    return "?";
}

double seconds_per(DurationUnit unit) {
    switch (unit) {
        case DurationUnit::Seconds: return 1.0;
        case DurationUnit::Minutes: return 60.0;
        case DurationUnit::Hours: return 3600.0;
        case DurationUnit::Days: return 86400.0;
        case DurationUnit::Weeks: return 604800.0;
    }
    return 1.0;
}

}  // namespace exmine
