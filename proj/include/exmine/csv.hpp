#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace exmine::csv {

struct Record {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based line on which the record starts
};

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes and newlines.
/// Accepts LF and CRLF line endings and skips a leading UTF-8 BOM.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of input. Blank lines are skipped.
    std::optional<Record> next();

private:
    std::istream& in_;
    std::size_t line_ = 1;
    bool first_ = true;
};

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Joins escaped fields with commas (no trailing newline).
std::string join_row(const std::vector<std::string>& fields);

}  // namespace exmine::csv
