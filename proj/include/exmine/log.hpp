#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exmine/timestamp.hpp"

namespace exmine {

using Path = std::vector<std::string>;
using Attributes = std::map<std::string, std::string>;

struct Event {
    std::string case_id;
    std::string activity;
    Instant timestamp;
    std::size_t row_index = 0;  // source line number
};

/// Column mapping for the CSV reader.
struct LogSchema {
    std::string case_column = "case_id";
    std::string activity_column = "activity";
    std::string timestamp_column = "timestamp";
    /// Extra columns copied into the per-case attribute map. The first non-empty
    /// value seen for a case wins.
    std::vector<std::string> attribute_columns;
    bool keep_all_attributes = false;
};

struct CaseEvents {
    std::string case_id;
    std::vector<Event> events;  // source order
    Attributes attributes;
};

struct EventLog {
    std::string source;
    std::size_t row_count = 0;
    std::vector<CaseEvents> cases;  // order of first appearance

    [[nodiscard]] std::size_t event_count() const;
};

struct Trace {
    std::string case_id;
    Path path;
    Instant start;
    Instant end;
    double throughput = 0.0;  // seconds
    Attributes attributes;
};

struct Variant {
    Path path;
    std::size_t case_count = 0;
    std::vector<std::string> case_ids;
    double case_share = 0.0;
};

/// Ordered by descending case_count, then shorter path, then lexicographic path.
using VariantTable = std::vector<Variant>;

struct RankedVariant {
    std::size_t rank = 0;  // 1-based
    Path path;
    std::size_t case_count = 0;
    double case_share = 0.0;
};

struct TopVariants {
    std::vector<RankedVariant> rows;
    /// Fraction of all variants in the table holding less than 1% of cases.
    double tail_fraction = 0.0;
};

EventLog parse_event_log(std::istream& in, const LogSchema& schema, std::string source_name = "<stream>");
EventLog parse_event_log(const std::filesystem::path& file, const LogSchema& schema);

/// One trace per case; events sorted by timestamp with source order kept on ties.
std::vector<Trace> build_traces(const EventLog& log);

/// Keeps traces whose last event falls in [from, to). Either bound may be absent.
std::vector<Trace> filter_by_completion(std::vector<Trace> traces, std::optional<Instant> from,
                                        std::optional<Instant> to);

VariantTable extract_variants(const std::vector<Trace>& traces);

/// True when `a` sorts before `b` in variant-table order.
bool variant_before(const Variant& a, const Variant& b);

TopVariants top_k_variants(const VariantTable& table, std::size_t k = 15);

/// Human-readable path, activities joined by " > ".
std::string format_path(const Path& path);

}  // namespace exmine
