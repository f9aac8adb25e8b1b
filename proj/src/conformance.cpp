#include "exmine/conformance.hpp"

#include <fstream>

#include "exmine/error.hpp"

namespace exmine {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

void check_structure(const std::set<ProcessModel::Edge>& edges) {
    bool has_start = false;
    bool has_end = false;
    for (const auto& [from, to] : edges) {
        if (to == kModelStart) throw InputError("model has an edge into __START__");
        if (from == kModelEnd) throw InputError("model has an edge out of __END__");
        has_start = has_start || from == kModelStart;
        has_end = has_end || to == kModelEnd;
    }
    if (!has_start) throw InputError("model has no start");
    if (!has_end) throw InputError("model has no end");
}

}  // namespace

const char* to_string(Expectedness e) {
    return e == Expectedness::Expected ? "expected" : "unexpected";
}

ProcessModel::ProcessModel(std::set<Edge> edges) : edges_(std::move(edges)) {
    check_structure(edges_);
    for (const auto& [from, to] : edges_) {
        if (from != kModelStart) activities_.insert(from);
        if (to != kModelEnd) activities_.insert(to);
    }
}

bool ProcessModel::has_edge(const std::string& from, const std::string& to) const {
    return edges_.count(Edge{from, to}) != 0;
}

Expectedness ProcessModel::classify(const Path& path) const {
    if (path.empty()) return Expectedness::Unexpected;
    if (!has_edge(kModelStart, path.front())) return Expectedness::Unexpected;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (!has_edge(path[i], path[i + 1])) return Expectedness::Unexpected;
    }
    return has_edge(path.back(), kModelEnd) ? Expectedness::Expected : Expectedness::Unexpected;
}

ProcessModel parse_model(std::istream& in) {
    std::set<ProcessModel::Edge> edges;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto arrow = line.find("->");
        if (arrow == std::string::npos || line.find("->", arrow + 2) != std::string::npos) {
            throw InputError("malformed model line, expected 'A -> B'", line_no);
        }
        std::string from = trim(std::string_view(line).substr(0, arrow));
        std::string to = trim(std::string_view(line).substr(arrow + 2));
        if (from.empty() || to.empty()) throw InputError("model edge with empty label", line_no);
        if (to == kModelStart) throw InputError("model has an edge into __START__", line_no);
        if (from == kModelEnd) throw InputError("model has an edge out of __END__", line_no);
        edges.emplace(std::move(from), std::move(to));
    }
    return ProcessModel(std::move(edges));
}

ProcessModel parse_model(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open model '" + file.string() + "'");
    return parse_model(in);
}

std::string format_model(const ProcessModel& model) {
    std::string out;
    for (const auto& [from, to] : model.edges()) out += from + " -> " + to + "\n";
    return out;
}

}  // namespace exmine
