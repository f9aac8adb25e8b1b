#include "exmine/log.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "exmine/csv.hpp"
#include "exmine/error.hpp"

namespace exmine {

std::size_t EventLog::event_count() const {
    std::size_t n = 0;
    for (const auto& c : cases) n += c.events.size();
    return n;
}

namespace {

std::size_t require_column(const std::vector<std::string>& header, const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InputError("missing column '" + name + "'", 1);
    return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

EventLog parse_event_log(std::istream& in, const LogSchema& schema, std::string source_name) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw InputError("empty log '" + source_name + "'");

    const auto& cols = header->fields;
    const std::size_t case_col = require_column(cols, schema.case_column);
    const std::size_t act_col = require_column(cols, schema.activity_column);
    const std::size_t ts_col = require_column(cols, schema.timestamp_column);

    std::vector<std::pair<std::string, std::size_t>> attr_cols;
    if (schema.keep_all_attributes) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i != case_col && i != act_col && i != ts_col) attr_cols.emplace_back(cols[i], i);
        }
    } else {
        for (const auto& name : schema.attribute_columns) {
            attr_cols.emplace_back(name, require_column(cols, name));
        }
    }
    const std::size_t needed = std::max({case_col, act_col, ts_col}) + 1;

    EventLog log;
    log.source = std::move(source_name);
    std::unordered_map<std::string, std::size_t> case_index;
    std::optional<TimestampFormat> format;

    while (auto rec = reader.next()) {
        const auto& f = rec->fields;
        if (f.size() < needed) throw InputError("too few fields", rec->line);
        Event ev{f[case_col], f[act_col], {}, rec->line};
        if (ev.case_id.empty()) throw InputError("empty case id", rec->line);
        if (ev.activity.empty()) throw InputError("empty activity", rec->line);
        if (!format) format = detect_timestamp_format(f[ts_col]);
        const auto ts = parse_timestamp(f[ts_col], *format);
        if (!ts) throw InputError("unparseable timestamp '" + f[ts_col] + "'", rec->line);
        ev.timestamp = *ts;

        auto [it, inserted] = case_index.try_emplace(ev.case_id, log.cases.size());
        if (inserted) log.cases.push_back(CaseEvents{ev.case_id, {}, {}});
        CaseEvents& ce = log.cases[it->second];
        for (const auto& [name, idx] : attr_cols) {
            if (idx < f.size() && !f[idx].empty()) ce.attributes.try_emplace(name, f[idx]);
        }
        ce.events.push_back(std::move(ev));
        ++log.row_count;
    }
    if (log.row_count == 0) throw InputError("log '" + log.source + "' has no events");
    return log;
}

EventLog parse_event_log(const std::filesystem::path& file, const LogSchema& schema) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot open log '" + file.string() + "'");
    return parse_event_log(in, schema, file.string());
}

std::vector<Trace> build_traces(const EventLog& log) {
    std::vector<Trace> traces;
    traces.reserve(log.cases.size());
    for (const auto& ce : log.cases) {
        if (ce.events.empty()) continue;
        std::vector<std::size_t> order(ce.events.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return ce.events[a].timestamp < ce.events[b].timestamp;
        });
        Trace t;
        t.case_id = ce.case_id;
        t.path.reserve(order.size());
        for (std::size_t i : order) t.path.push_back(ce.events[i].activity);
        t.start = ce.events[order.front()].timestamp;
        t.end = ce.events[order.back()].timestamp;
        t.throughput = seconds_between(t.start, t.end);
        t.attributes = ce.attributes;
        traces.push_back(std::move(t));
    }
    return traces;
}

std::vector<Trace> filter_by_completion(std::vector<Trace> traces, std::optional<Instant> from,
                                        std::optional<Instant> to) {
    std::erase_if(traces, [&](const Trace& t) {
        return (from && t.end < *from) || (to && !(t.end < *to));
    });
    return traces;
}

bool variant_before(const Variant& a, const Variant& b) {
    if (a.case_count != b.case_count) return a.case_count > b.case_count;
    if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
    return a.path < b.path;
}

VariantTable extract_variants(const std::vector<Trace>& traces) {
    std::map<Path, std::size_t> index;
    VariantTable table;
    for (const auto& t : traces) {
        auto [it, inserted] = index.try_emplace(t.path, table.size());
        if (inserted) table.push_back(Variant{t.path, 0, {}, 0.0});
        Variant& v = table[it->second];
        ++v.case_count;
        v.case_ids.push_back(t.case_id);
    }
    const double total = static_cast<double>(traces.size());
    for (auto& v : table) v.case_share = static_cast<double>(v.case_count) / total;
    std::sort(table.begin(), table.end(), variant_before);
    return table;
}

TopVariants top_k_variants(const VariantTable& table, std::size_t k) {
    if (k == 0) throw AnalysisError("top_k_variants: k must be at least 1");
    TopVariants out;
    const std::size_t n = std::min(k, table.size());
    for (std::size_t i = 0; i < n; ++i) {
        out.rows.push_back({i + 1, table[i].path, table[i].case_count, table[i].case_share});
    }
    if (!table.empty()) {
        const auto small = std::count_if(table.begin(), table.end(),
                                         [](const Variant& v) { return v.case_share < 0.01; });
        out.tail_fraction = static_cast<double>(small) / static_cast<double>(table.size());
    }
    return out;
}

std::string format_path(const Path& path) {
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out += " > ";
        out += path[i];
    }
    return out;
}

}  // namespace exmine
