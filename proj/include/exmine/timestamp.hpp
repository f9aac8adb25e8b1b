#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace exmine {

/// Absolute point in time, microseconds since 1970-01-01T00:00:00Z.
struct Instant {
    std::int64_t micros = 0;

    static constexpr Instant from_seconds(std::int64_t s) { return Instant{s * 1'000'000}; }
    [[nodiscard]] constexpr double seconds() const { return static_cast<double>(micros) / 1e6; }

    friend constexpr auto operator<=>(Instant, Instant) = default;
};

/// Seconds between two instants (b - a).
constexpr double seconds_between(Instant a, Instant b) {
    return static_cast<double>(b.micros - a.micros) / 1e6;
}

enum class TimestampFormat { Rfc3339, EpochSeconds };

/// Guesses the format from one sample: an optionally signed run of digits is epoch seconds.
TimestampFormat detect_timestamp_format(std::string_view text);

/// `YYYY-MM-DD[T ]HH:MM:SS[.fraction][Z|+HH:MM|-HH:MM]`. A missing offset is read as UTC.
std::optional<Instant> parse_rfc3339(std::string_view text);

std::optional<Instant> parse_epoch_seconds(std::string_view text);

std::optional<Instant> parse_timestamp(std::string_view text, TimestampFormat format);

/// `YYYY-MM-DDTHH:MM:SSZ`, fractional seconds truncated.
std::string format_rfc3339(Instant t);

/// `YYYY-MM-DD` in UTC.
std::string format_date(Instant t);

}  // namespace exmine
