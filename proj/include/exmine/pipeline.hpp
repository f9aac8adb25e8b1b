#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "exmine/analysis.hpp"
#include "exmine/conformance.hpp"
#include "exmine/format.hpp"
#include "exmine/log.hpp"
#include "exmine/scenario.hpp"

namespace exmine {

/// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNothingAnalyzed = 2;

struct RunConfig {
    std::filesystem::path log_path;
    std::optional<std::filesystem::path> model_path;
    std::optional<std::filesystem::path> outcome_path;
    LogSchema schema;
    GroupingPolicy policy;
    std::size_t top_k = 15;
    DurationUnit unit = DurationUnit::Days;
    std::filesystem::path out_dir;
    std::optional<Instant> completed_from;  // keep cases whose last event is >= this
    std::optional<Instant> completed_to;    // and < this
};

struct LoadedInputs {
    std::vector<Trace> traces;
    OutcomePolicy outcome;
    ScenarioPartition partition;
    std::optional<ProcessModel> model;
};

/// Parses the log, builds traces, applies the completion filter, and partitions
/// into scenarios. The outcome attribute column is added to the schema when needed.
LoadedInputs load_inputs(const RunConfig& config);

/// End-to-end run that writes the report bundle to config.out_dir. Returns kExitOk, or
/// kExitNothingAnalyzed when no scenario reached a test. Input problems throw InputError.
int run_pipeline(const RunConfig& config, AnalysisResult* result_out = nullptr);

}  // namespace exmine
