#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace exmine {

/// Six significant digits, shortest of fixed/scientific (printf %g), ties rounded
/// half to even on the binary value. Non-finite values print as "NA".
std::string format_number(double value);
std::string format_number(std::optional<double> value);

enum class DurationUnit { Seconds, Minutes, Hours, Days, Weeks };

std::optional<DurationUnit> parse_duration_unit(std::string_view name);
std::string_view to_string(DurationUnit unit);
double seconds_per(DurationUnit unit);

inline double to_unit(double seconds, DurationUnit unit) { return seconds / seconds_per(unit); }

}  // namespace exmine
