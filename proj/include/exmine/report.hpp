#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "exmine/analysis.hpp"
#include "exmine/format.hpp"

namespace exmine {

struct ReportOptions {
    std::string process_name = "process";
    DurationUnit unit = DurationUnit::Days;
};

/// Relative file name -> contents for every CSV table (`tables/table1.csv`, ...).
/// table3.csv and table5.csv are present only when a model was supplied.
std::map<std::string, std::string> render_tables(const AnalysisResult& result, const ReportOptions& options);

/// Human-readable report; every number in it also appears in one of the tables.
std::string render_markdown(const AnalysisResult& result, const ReportOptions& options);

/// Machine-readable list of skipped scenarios, excluded groups and case accounting.
std::string render_summary(const AnalysisResult& result, int exit_status);

enum class ReportFormat { Markdown, CsvBundle };

/// Writes the requested parts into `dir` (created if needed); summary.json is always written.
/// Throws InputError when the directory cannot be written.
void write_report(const AnalysisResult& result, const ReportOptions& options, const std::filesystem::path& dir,
                  int exit_status, bool markdown = true, bool csv_bundle = true);

/// Arrow used in the markdown tables: up, down, left-right, or empty.
std::string direction_symbol(Direction d);

}  // namespace exmine
