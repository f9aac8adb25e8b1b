#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "exmine/log.hpp"

namespace exmine {

inline constexpr const char* kUnlabeledScenario = "__UNLABELED__";

/// How a trace's outcome (and hence its scenario) is determined.
struct OutcomePolicy {
    enum class Mode { LastActivity, MarkerSet, CaseAttribute };

    Mode mode = Mode::LastActivity;
    std::map<std::string, std::string> markers;  // activity -> outcome label
    std::string attribute;

    /// Throws InputError when the policy is inconsistent with its mode.
    void validate() const;
};

/// Plain-text `key=value` lines: `mode=marker_set`, `marker.<activity>=<outcome>`,
/// `attribute=<column>`. `#` starts a comment line.
OutcomePolicy parse_outcome_policy(std::istream& in);
OutcomePolicy parse_outcome_policy(const std::filesystem::path& file);

struct Scenario {
    std::string label;
    std::vector<std::size_t> traces;  // indices into the trace set
    VariantTable variants;
    Path normal_flow;
};

struct ScenarioPartition {
    std::vector<Scenario> scenarios;  // sorted by label
    std::size_t unlabeled_cases = 0;
};

/// Outcome label of one trace under `policy`, or kUnlabeledScenario.
std::string outcome_label(const Trace& trace, const OutcomePolicy& policy);

/// Partitions traces into scenarios and elects each scenario's normal flow.
ScenarioPartition assign_scenarios(const std::vector<Trace>& traces, const OutcomePolicy& policy);

/// Most frequent path; ties go to the shorter, then lexicographically smaller path.
Path select_normal_flow(const VariantTable& variants);

}  // namespace exmine
