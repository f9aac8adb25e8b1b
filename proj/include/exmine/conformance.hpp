#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <set>
#include <string>
#include <utility>

#include "exmine/log.hpp"

namespace exmine {

inline constexpr const char* kModelStart = "__START__";
inline constexpr const char* kModelEnd = "__END__";

enum class Expectedness { Expected, Unexpected };

const char* to_string(Expectedness e);

/// Directly-follows graph with exclusive choice at every branch.
class ProcessModel {
public:
    using Edge = std::pair<std::string, std::string>;

    /// Throws InputError unless the edge set has a start, an end, and no edge
    /// into __START__ or out of __END__.
    explicit ProcessModel(std::set<Edge> edges);

    [[nodiscard]] const std::set<Edge>& edges() const noexcept { return edges_; }
    /// Activity nodes, pseudo-nodes excluded.
    [[nodiscard]] const std::set<std::string>& activities() const noexcept { return activities_; }
    [[nodiscard]] bool has_edge(const std::string& from, const std::string& to) const;

    /// Expected iff the path is a walk from __START__ to __END__.
    [[nodiscard]] Expectedness classify(const Path& path) const;

private:
    std::set<Edge> edges_;
    std::set<std::string> activities_;
};

/// One `A -> B` edge per line; `#` comments and blank lines are ignored.
ProcessModel parse_model(std::istream& in);
ProcessModel parse_model(const std::filesystem::path& file);

/// Renders the model in the same line format, edges sorted.
std::string format_model(const ProcessModel& model);

inline Expectedness classify_expectedness(const Path& path, const ProcessModel& model) {
    return model.classify(path);
}

}  // namespace exmine
