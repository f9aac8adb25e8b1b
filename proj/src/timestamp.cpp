#include "exmine/timestamp.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace exmine {
namespace {

bool read_digits(std::string_view s, std::size_t pos, std::size_t count, int& out) {
    if (pos + count > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

TimestampFormat detect_timestamp_format(std::string_view text) {
    text = trim(text);
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) text.remove_prefix(1);
    if (text.empty()) return TimestampFormat::Rfc3339;
    for (char c : text) {
        if (c < '0' || c > '9') return TimestampFormat::Rfc3339;
    }
    return TimestampFormat::EpochSeconds;
}

std::optional<Instant> parse_rfc3339(std::string_view s) {
    s = trim(s);
    int year, month, day, hour, minute, second;
    if (!read_digits(s, 0, 4, year) || s.size() < 19 || s[4] != '-' ||
        !read_digits(s, 5, 2, month) || s[7] != '-' || !read_digits(s, 8, 2, day) ||
        !(s[10] == 'T' || s[10] == 't' || s[10] == ' ') || !read_digits(s, 11, 2, hour) ||
        s[13] != ':' || !read_digits(s, 14, 2, minute) || s[16] != ':' ||
        !read_digits(s, 17, 2, second)) {
        return std::nullopt;
    }
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                             std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) return std::nullopt;

    std::size_t pos = 19;
    std::int64_t frac_micros = 0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        std::int64_t scale = 100'000;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            frac_micros += (s[pos] - '0') * scale;
            scale /= 10;
            ++pos;
        }
        if (pos == start) return std::nullopt;
    }

    std::int64_t offset_seconds = 0;
    if (pos < s.size()) {
        const char c = s[pos];
        if ((c == 'Z' || c == 'z') && pos + 1 == s.size()) {
            pos = s.size();
        } else if (c == '+' || c == '-') {
            int oh, om;
            if (s.size() != pos + 6 || !read_digits(s, pos + 1, 2, oh) || s[pos + 3] != ':' ||
                !read_digits(s, pos + 4, 2, om) || oh > 23 || om > 59) {
                return std::nullopt;
            }
            offset_seconds = (oh * 3600 + om * 60) * (c == '+' ? 1 : -1);
            pos = s.size();
        } else {
            return std::nullopt;
        }
    }

    const auto days = sys_days{ymd}.time_since_epoch().count();
    const std::int64_t secs = static_cast<std::int64_t>(days) * 86400 + hour * 3600 + minute * 60 +
                              second - offset_seconds;
    return Instant{secs * 1'000'000 + frac_micros};
}

std::optional<Instant> parse_epoch_seconds(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    if (v > 9'000'000'000'000LL || v < -9'000'000'000'000LL) return std::nullopt;
    return Instant::from_seconds(v);
}

std::optional<Instant> parse_timestamp(std::string_view text, TimestampFormat format) {
    return format == TimestampFormat::EpochSeconds ? parse_epoch_seconds(text) : parse_rfc3339(text);
}

namespace {

struct Civil {
    int year;
    unsigned month, day;
    std::int64_t sec_of_day;
};

Civil to_civil(Instant t) {
    using namespace std::chrono;
    std::int64_t secs = t.micros / 1'000'000;
    if (t.micros % 1'000'000 < 0) --secs;
    std::int64_t days = secs / 86400;
    std::int64_t rem = secs % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
            static_cast<unsigned>(ymd.day()), rem};
}

}  // namespace

std::string format_rfc3339(Instant t) {
    const Civil c = to_civil(t);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", c.year, c.month, c.day,
                  static_cast<int>(c.sec_of_day / 3600), static_cast<int>(c.sec_of_day / 60 % 60),
                  static_cast<int>(c.sec_of_day % 60));
    return buf;
}

std::string format_date(Instant t) {
    const Civil c = to_civil(t);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", c.year, c.month, c.day);
    return buf;
}

}  // namespace exmine
