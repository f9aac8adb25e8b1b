#include "exmine/report.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "exmine/csv.hpp"
#include "exmine/error.hpp"

namespace exmine {
namespace {

std::string count(std::size_t n) { return std::to_string(n); }

std::string percent(double fraction) { return format_number(100.0 * fraction); }

std::string average(std::size_t cases, std::size_t paths) {
    return paths ? format_number(static_cast<double>(cases) / static_cast<double>(paths)) : "NA";
}

double share_of(const std::map<ExceptionType, double>& m, ExceptionType t) {
    const auto it = m.find(t);
    return it == m.end() ? 0.0 : it->second;
}

std::string in_unit(double seconds, DurationUnit unit) { return format_number(to_unit(seconds, unit)); }

/// Column order used for the type-frequency table.
constexpr std::array<ExceptionType, 8> kFrequencyColumns = {
    ExceptionType::EarlyEntry, ExceptionType::LateEntry, ExceptionType::EarlyExit, ExceptionType::LateExit,
    ExceptionType::Repeat,     ExceptionType::StepBack,  ExceptionType::Add,       ExceptionType::Skip,
};

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

class Table {
public:
    explicit Table(std::vector<std::string> header) { add(std::move(header)); }
    void add(std::vector<std::string> row) { text_ += csv::join_row(row) + "\n"; }
    [[nodiscard]] const std::string& str() const { return text_; }

private:
    std::string text_;
};

const char* omnibus_label(const OmnibusAnalysis& a, double alpha) {
    if (!a.performed) return "NOT_APPLICABLE";
    return a.omnibus.p_raw < alpha ? "SIGNIFICANT" : "NOT_SIGNIFICANT";
}

std::vector<std::string> omnibus_row(const std::string& scenario, const OmnibusAnalysis& a,
                                     const GroupSet& groups, double alpha) {
    if (!a.performed) {
        return {scenario, "*", "*", count(groups.accounting.eligible), "NA", "NA", "NA", "NA",
                "NOT_APPLICABLE", a.note};
    }
    return {scenario, "*", "*", count(groups.accounting.eligible), format_number(a.omnibus.statistic),
            std::to_string(a.omnibus.df), format_number(a.omnibus.p_raw), format_number(a.omnibus.p_adjusted),
            omnibus_label(a, alpha), "Kruskal-Wallis H"};
}

std::vector<std::string> cell_row(const std::string& scenario, const DirectionCell& c, const std::string& note) {
    if (c.direction == Direction::NotApplicable) {
        return {scenario, c.group, c.versus, count(c.group_size), "NA", "NA", "NA", "NA", "NOT_APPLICABLE", note};
    }
    return {scenario, c.group, c.versus, count(c.group_size), format_number(c.statistic), "1",
            format_number(c.p_raw), format_number(c.p_adjusted), stats::to_string(c.direction), "Dunn z, Bonferroni"};
}

const std::vector<std::string> kTestHeader = {"scenario", "group", "versus", "group_size", "statistic",
                                              "df", "p_raw", "p_adjusted", "direction", "note"};

std::string type_label(const std::string& group) {
    // "ADD+SKIP" -> "Add (with Skip)"
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto plus = group.find('+', start);
        parts.push_back(group.substr(start, plus - start));
        if (plus == std::string::npos) break;
        start = plus + 1;
    }
    auto pretty = [](std::string name) {
        std::string out;
        bool upper = true;
        for (char c : name) {
            if (c == '_') {
                out.push_back('-');
                upper = true;
                continue;
            }
            out.push_back(upper ? c : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            upper = false;
        }
        return out;
    };
    std::string out = pretty(parts.front());
    if (parts.size() > 1) {
        out += " (with ";
        for (std::size_t i = 1; i < parts.size(); ++i) {
            if (i > 1) out += " & ";
            out += pretty(parts[i]);
        }
        out += ")";
    }
    return out;
}

}  // namespace

std::string direction_symbol(Direction d) {
    switch (d) {
        case Direction::Longer: return "↑";
        case Direction::Shorter: return "↓";
        case Direction::NotSignificant: return "↔";
        case Direction::NotApplicable: return "";
    }
    return "";
}

std::map<std::string, std::string> render_tables(const AnalysisResult& r, const ReportOptions& o) {
    std::map<std::string, std::string> files;
    const std::string unit(to_string(o.unit));
    const double alpha = r.policy.alpha;

    {
        Table t({"process", "start_date", "end_date", "cases", "avg_throughput_" + unit, "std_throughput_" + unit,
                 "variants", "variants_below_1pct_fraction"});
        const auto& p = r.process;
        std::size_t variants = 0;
        for (const auto& s : r.scenarios) variants += s.normal.paths + s.exceptions.paths;
        t.add({o.process_name, p.cases ? format_date(p.first_start) : "NA", p.cases ? format_date(p.last_end) : "NA",
               count(p.cases), p.cases ? in_unit(p.throughput.mean, o.unit) : "NA",
               p.cases ? in_unit(p.throughput.std, o.unit) : "NA", count(variants), format_number(r.top.tail_fraction)});
        files["tables/table1.csv"] = t.str();
    }
    {
        Table t({"scenario", "type_of_path", "paths", "cases", "avg_cases_per_path"});
        for (const auto& s : r.scenarios) {
            t.add({s.label, "normal", count(s.normal.paths), count(s.normal.cases), average(s.normal.cases, s.normal.paths)});
            t.add({s.label, "exceptions", count(s.exceptions.paths), count(s.exceptions.cases),
                   average(s.exceptions.cases, s.exceptions.paths)});
        }
        files["tables/table2.csv"] = t.str();
    }
    if (r.model_supplied) {
        Table t({"scenario", "type_of_path", "paths", "cases", "avg_cases_per_path", "normal_flow_in_model"});
        for (const auto& s : r.scenarios) {
            const std::string in_model =
                s.normal_flow_expectedness == Expectedness::Expected ? "yes" : "no";
            t.add({s.label, "normal", count(s.normal.paths), count(s.normal.cases),
                   average(s.normal.cases, s.normal.paths), in_model});
            t.add({s.label, "expected", count(s.expected.paths), count(s.expected.cases),
                   average(s.expected.cases, s.expected.paths), in_model});
            t.add({s.label, "unexpected", count(s.unexpected.paths), count(s.unexpected.cases),
                   average(s.unexpected.cases, s.unexpected.paths), in_model});
        }
        files["tables/table3.csv"] = t.str();
    }
    {
        std::vector<std::string> header{"scenario", "basis", "denominator"};
        for (auto type : kFrequencyColumns) header.push_back(lower(to_string(type)) + "_pct");
        Table t(header);
        auto emit = [&](const std::string& label, const TypeFrequency& f) {
            std::vector<std::string> by_path{label, "paths", count(f.exception_paths)};
            std::vector<std::string> by_case{label, "cases", count(f.exception_cases)};
            for (auto type : kFrequencyColumns) {
                by_path.push_back(percent(share_of(f.per_path, type)));
                by_case.push_back(percent(share_of(f.per_case, type)));
            }
            t.add(by_path);
            t.add(by_case);
        };
        for (const auto& s : r.scenarios) emit(s.label, s.frequency);
        emit("*", r.frequency);
        files["tables/table4.csv"] = t.str();
    }
    if (r.model_supplied) {
        Table t(kTestHeader);
        for (const auto& s : r.scenarios) {
            t.add(omnibus_row(s.label, s.expectedness_analysis, s.expectedness_groups, alpha));
            for (const auto& c : s.expectedness_analysis.cells) {
                t.add(cell_row(s.label, c, s.expectedness_analysis.note.empty() ? "group not eligible"
                                                                              : s.expectedness_analysis.note));
            }
        }
        files["tables/table5.csv"] = t.str();
    }
    {
        Table t(kTestHeader);
        for (const auto& s : r.scenarios) {
            t.add(omnibus_row(s.label, s.type_analysis, s.type_groups, alpha));
            for (const auto& c : s.type_analysis.cells) t.add(cell_row(s.label, c, ""));
            for (const auto& e : s.type_groups.excluded) {
                DirectionCell c;
                c.group = e.label;
                c.versus = kNormalGroup;
                c.group_size = e.size;
                t.add(cell_row(s.label, c, e.reason));
            }
        }
        files["tables/table6.csv"] = t.str();
    }
    {
        Table t(kTestHeader);
        for (const auto& s : r.scenarios) {
            t.add(omnibus_row(s.label, s.pooled_analysis, s.pooled_groups, alpha));
            for (const auto& c : s.pooled_analysis.cells) t.add(cell_row(s.label, c, ""));
        }
        files["tables/pooled.csv"] = t.str();
    }
    {
        Table t({"scenario", "population", "n", "mean_" + unit, "std_" + unit, "skewness", "excess_kurtosis"});
        auto emit = [&](const std::string& label, const char* population, const std::optional<GroupStats>& g) {
            if (!g) return;
            t.add({label, population, count(g->n), in_unit(g->mean, o.unit), in_unit(g->std, o.unit),
                   format_number(g->skewness), format_number(g->kurtosis)});
        };
        for (const auto& s : r.scenarios) {
            emit(s.label, "type_analysis", s.type_population);
            emit(s.label, "expectedness_analysis", s.expectedness_population);
        }
        files["tables/descriptives.csv"] = t.str();
    }
    {
        Table t({"hypothesis", "subject", "verdict", "evidence"});
        for (const auto& h : r.verdicts) {
            std::string evidence;
            for (const auto& e : h.evidence) evidence += (evidence.empty() ? "" : " | ") + e;
            t.add({h.id, "*", to_string(h.verdict), evidence});
            for (const auto& tv : h.per_type) {
                std::string ev;
                for (const auto& e : tv.evidence) ev += (ev.empty() ? "" : " | ") + e;
                t.add({h.id, std::string(to_string(tv.type)), to_string(tv.verdict), ev});
            }
        }
        files["tables/hypotheses.csv"] = t.str();
    }
    {
        Table t({"key", "value"});
        t.add({"process", o.process_name});
        t.add({"alpha", format_number(alpha)});
        t.add({"min_group_size", count(r.policy.min_group_size)});
        t.add({"max_types", count(r.policy.max_types)});
        t.add({"pairwise_test", "dunn"});
        t.add({"adjustment", "bonferroni"});
        t.add({"model_supplied", r.model_supplied ? "yes" : "no"});
        t.add({"unlabeled_cases", count(r.unlabeled_cases)});
        t.add({"duration_unit", unit});
        files["tables/run.csv"] = t.str();
    }
    {
        Table t({"rank", "path", "case_share", "case_count"});
        for (const auto& row : r.top.rows) {
            t.add({count(row.rank), format_path(row.path), format_number(row.case_share), count(row.case_count)});
        }
        files["tables/figure2.csv"] = t.str();
    }
    return files;
}

namespace {

void md_row(std::ostringstream& out, const std::vector<std::string>& cells) {
    out << '|';
    for (const auto& c : cells) {
        std::string escaped;
        for (char ch : c) {
            if (ch == '|') escaped += "\\|";
            else escaped.push_back(ch);
        }
        out << ' ' << escaped << " |";
    }
    out << '\n';
}

void md_header(std::ostringstream& out, const std::vector<std::string>& cells) {
    md_row(out, cells);
    out << '|';
    for (std::size_t i = 0; i < cells.size(); ++i) out << "---|";
    out << '\n';
}

std::string arrow_cell(const DirectionCell& c) {
    if (c.direction == Direction::NotApplicable) return "";
    return direction_symbol(c.direction) + " (p_adj " + format_number(c.p_adjusted) + ")";
}

}  // namespace

std::string render_markdown(const AnalysisResult& r, const ReportOptions& o) {
    std::ostringstream out;
    const std::string unit(to_string(o.unit));
    out << "# Exception analysis: " << o.process_name << "\n\n";
    out << "Policy: alpha " << format_number(r.policy.alpha) << ", minimum group size "
        << r.policy.min_group_size << ", at most " << r.policy.max_types
        << " exception types per case. Pairwise tests: Dunn's z on pooled ranks, Bonferroni-adjusted per scenario.\n\n";
    if (!r.model_supplied) out << "No model supplied: expected/unexpected analysis omitted.\n\n";
    if (r.unlabeled_cases) out << "Cases without an outcome label: " << r.unlabeled_cases << ".\n\n";

    out << "## Process\n\n";
    md_header(out, {"cases", "start", "end", "avg throughput (" + unit + ")", "std throughput (" + unit + ")",
                    "variants < 1% of cases"});
    if (r.process.cases) {
        md_row(out, {count(r.process.cases), format_date(r.process.first_start), format_date(r.process.last_end),
                     in_unit(r.process.throughput.mean, o.unit), in_unit(r.process.throughput.std, o.unit),
                     format_number(r.top.tail_fraction)});
    }

    out << "\n## Scenarios\n\n";
    md_header(out, {"scenario", "type of path", "paths", "cases", "avg cases per path"});
    for (const auto& s : r.scenarios) {
        md_row(out, {s.label, "normal", count(s.normal.paths), count(s.normal.cases), average(s.normal.cases, s.normal.paths)});
        md_row(out, {"", "exceptions", count(s.exceptions.paths), count(s.exceptions.cases),
                     average(s.exceptions.cases, s.exceptions.paths)});
    }
    out << "\nNormal flows:\n\n";
    for (const auto& s : r.scenarios) out << "- " << s.label << ": " << format_path(s.normal_flow) << "\n";

    if (r.model_supplied) {
        out << "\n## Expected and unexpected exceptions\n\n";
        md_header(out, {"scenario", "type of path", "paths", "avg cases per path"});
        for (const auto& s : r.scenarios) {
            md_row(out, {s.label, std::string("normal") + (s.normal_flow_expectedness == Expectedness::Expected
                                                                ? ""
                                                                : " (not in model)"),
                         count(s.normal.paths), average(s.normal.cases, s.normal.paths)});
            md_row(out, {"", "expected", count(s.expected.paths), average(s.expected.cases, s.expected.paths)});
            md_row(out, {"", "unexpected", count(s.unexpected.paths), average(s.unexpected.cases, s.unexpected.paths)});
        }
    }

    out << "\n## Exception type frequency (% of exception paths)\n\n";
    {
        std::vector<std::string> header{"scenario"};
        for (auto t : kFrequencyColumns) header.push_back(lower(to_string(t)));
        md_header(out, header);
        auto emit = [&](const std::string& label, const TypeFrequency& f) {
            std::vector<std::string> row{label};
            for (auto t : kFrequencyColumns) row.push_back(percent(share_of(f.per_path, t)) + "%");
            md_row(out, row);
        };
        for (const auto& s : r.scenarios) emit(s.label, s.frequency);
        emit("all", r.frequency);
    }

    auto descriptives = [&](const std::optional<GroupStats>& g) -> std::vector<std::string> {
        if (!g) return {"", "", "", "", ""};
        return {count(g->n), in_unit(g->mean, o.unit), in_unit(g->std, o.unit), format_number(g->skewness),
                format_number(g->kurtosis)};
    };

    if (r.model_supplied) {
        out << "\n## Expected/unexpected exceptions and throughput time\n\n";
        md_header(out, {"scenario", "n", "avg (" + unit + ")", "std", "skewness", "kurtosis (excess)", "expected",
                        "unexpected", "unexpected vs expected"});
        for (const auto& s : r.scenarios) {
            std::vector<std::string> row{s.label};
            for (auto& d : descriptives(s.expectedness_population)) row.push_back(d);
            for (const auto& c : s.expectedness_analysis.cells) row.push_back(arrow_cell(c));
            md_row(out, row);
        }
    }

    out << "\n## Exception types and throughput time\n\n";
    md_header(out, {"scenario", "n", "avg (" + unit + ")", "std", "skewness", "kurtosis (excess)", "H", "p"});
    for (const auto& s : r.scenarios) {
        std::vector<std::string> row{s.label};
        for (auto& d : descriptives(s.type_population)) row.push_back(d);
        if (s.type_analysis.performed) {
            row.push_back(format_number(s.type_analysis.omnibus.statistic));
            row.push_back(format_number(s.type_analysis.omnibus.p_raw));
        } else {
            row.push_back("");
            row.push_back("");
        }
        md_row(out, row);
    }
    out << '\n';
    md_header(out, {"scenario", "exception type", "cases", "vs normal flow"});
    for (const auto& s : r.scenarios) {
        for (const auto& c : s.type_analysis.cells) {
            md_row(out, {s.label, type_label(c.group), count(c.group_size), arrow_cell(c)});
        }
    }
    out << "\n↑ longer throughput time, ↓ shorter, ↔ no significant difference.\n";

    out << "\n## Exceptions pooled\n\n";
    md_header(out, {"scenario", "exception cases", "vs normal flow"});
    for (const auto& s : r.scenarios) {
        for (const auto& c : s.pooled_analysis.cells) md_row(out, {s.label, count(c.group_size), arrow_cell(c)});
    }

    out << "\n## Hypotheses\n\n";
    md_header(out, {"hypothesis", "verdict"});
    for (const auto& h : r.verdicts) md_row(out, {h.id, to_string(h.verdict)});
    for (const auto& h : r.verdicts) {
        if (h.per_type.empty()) continue;
        out << "\n" << h.id << " by type:\n\n";
        for (const auto& tv : h.per_type) out << "- " << to_string(tv.type) << ": " << to_string(tv.verdict) << "\n";
    }

    bool any_skip = false;
    for (const auto& s : r.scenarios) {
        if (!s.skipped) continue;
        if (!any_skip) out << "\n## Skipped scenarios\n\n";
        any_skip = true;
        out << "- " << s.label << ": " << s.skip_reason << "\n";
    }

    out << "\n## Most frequent paths\n\n";
    md_header(out, {"rank", "share of cases", "path"});
    for (const auto& row : r.top.rows) md_row(out, {count(row.rank), format_number(row.case_share), format_path(row.path)});
    return out.str();
}

std::string render_summary(const AnalysisResult& r, int exit_status) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["exit_status"] = exit_status;
    j["model_supplied"] = r.model_supplied;
    j["policy"] = {{"alpha", r.policy.alpha},
                   {"min_group_size", r.policy.min_group_size},
                   {"max_types", r.policy.max_types},
                   {"pairwise_test", "dunn"},
                   {"adjustment", "bonferroni"}};
    j["cases"] = r.process.cases;
    j["unlabeled_cases"] = r.unlabeled_cases;
    j["skipped_scenarios"] = ordered_json::array();
    j["excluded_groups"] = ordered_json::array();
    j["accounting"] = ordered_json::array();
    for (const auto& s : r.scenarios) {
        if (s.skipped) j["skipped_scenarios"].push_back({{"scenario", s.label}, {"reason", s.skip_reason}});
        const std::pair<const char*, const GroupSet*> sets[] = {
            {"type", &s.type_groups}, {"expectedness", &s.expectedness_groups}, {"pooled", &s.pooled_groups}};
        for (const auto& [name, g] : sets) {
            if (std::string(name) == "expectedness" && !r.model_supplied) continue;
            for (const auto& e : g->excluded) {
                j["excluded_groups"].push_back(
                    {{"scenario", s.label}, {"analysis", name}, {"group", e.label}, {"size", e.size}, {"reason", e.reason}});
            }
            j["accounting"].push_back({{"scenario", s.label},
                                       {"analysis", name},
                                       {"total", g->accounting.total},
                                       {"eligible", g->accounting.eligible},
                                       {"excluded", g->accounting.excluded},
                                       {"skipped", g->accounting.skipped}});
        }
    }
    return j.dump(2) + "\n";
}

void write_report(const AnalysisResult& result, const ReportOptions& options, const std::filesystem::path& dir,
                  int exit_status, bool markdown, bool csv_bundle) {
    std::error_code ec;
    std::filesystem::create_directories(dir / "tables", ec);
    if (ec) throw InputError("cannot create output directory '" + dir.string() + "': " + ec.message());
    auto write = [&](const std::filesystem::path& file, const std::string& text) {
        std::ofstream f(file, std::ios::binary | std::ios::trunc);
        if (!f || !(f << text) || !f.flush()) throw InputError("cannot write '" + file.string() + "'");
    };
    if (csv_bundle) {
        for (const auto& [name, text] : render_tables(result, options)) write(dir / name, text);
    }
    if (markdown) write(dir / "report.md", render_markdown(result, options));
    write(dir / "summary.json", render_summary(result, exit_status));
}

}  // namespace exmine
