#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace exmine {

/// Bad or unreadable input (log, model, policy, config). Maps to CLI exit code 1.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what, std::optional<std::size_t> line = std::nullopt)
        : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + what : what),
          line_(line) {}

    [[nodiscard]] std::optional<std::size_t> line() const noexcept { return line_; }

private:
    std::optional<std::size_t> line_;
};

/// Precondition violated by a caller of the analysis API.
class AnalysisError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace exmine
