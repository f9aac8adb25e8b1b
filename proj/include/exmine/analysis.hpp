#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exmine/classifier.hpp"
#include "exmine/conformance.hpp"
#include "exmine/log.hpp"
#include "exmine/scenario.hpp"
#include "exmine/stats.hpp"

namespace exmine {

using stats::Direction;
using stats::GroupStats;
using stats::TestResult;

struct GroupingPolicy {
    std::size_t max_types = 2;        // at most this many distinct types per case
    std::size_t min_group_size = 26;  // groups need at least this many cases (i.e. > 25)
    double alpha = 0.01;

    /// Throws InputError when out of range.
    void validate() const;
};

/// Everything known about one case after classification.
struct CaseRecord {
    std::size_t trace = 0;    // index into the trace set
    std::size_t variant = 0;  // index into the scenario's variant table
    std::string scenario;
    std::shared_ptr<const ExceptionProfile> profile;  // shared by all cases of a variant
    std::optional<Expectedness> expectedness;         // set when a model is supplied
    double throughput = 0.0;                          // seconds

    [[nodiscard]] bool is_normal() const { return profile->is_normal(); }
};

enum class Grouping { ByTypeSet, ByExpectedness, NormalVsException };

inline constexpr const char* kNormalGroup = "NORMAL";
inline constexpr const char* kExpectedGroup = "EXPECTED";
inline constexpr const char* kUnexpectedGroup = "UNEXPECTED";
inline constexpr const char* kExceptionGroup = "EXCEPTION";

struct Group {
    std::string label;  // type sets are '+'-joined names, e.g. "ADD+SKIP"
    TypeSet types;
    std::vector<double> samples;
};

struct ExcludedGroup {
    std::string label;
    std::size_t size = 0;
    std::string reason;
};

struct GroupAccounting {
    std::size_t total = 0;
    std::size_t eligible = 0;
    std::size_t excluded = 0;
    std::size_t skipped = 0;
};

struct GroupSet {
    Grouping mode = Grouping::ByTypeSet;
    bool skipped = false;
    std::string skip_reason;
    Group normal;
    std::vector<Group> exceptions;  // eligible only, sorted by label
    std::vector<ExcludedGroup> excluded;
    GroupAccounting accounting;

    /// Throughputs of every eligible case (normal first).
    [[nodiscard]] std::vector<double> pooled_samples() const;
};

GroupSet build_groups(std::span<const CaseRecord> cases, const GroupingPolicy& policy, Grouping grouping);

struct DirectionCell {
    std::string group;
    std::string versus;
    TypeSet types;
    std::size_t group_size = 0;
    Direction direction = Direction::NotApplicable;
    double statistic = 0.0;  // Dunn z
    double p_raw = 1.0;
    double p_adjusted = 1.0;
};

struct OmnibusAnalysis {
    bool performed = false;
    std::string note;
    TestResult omnibus;
    std::vector<DirectionCell> cells;
};

/// Omnibus over every eligible group, then each exception group against normal.
OmnibusAnalysis run_type_analysis(const GroupSet& groups, const GroupingPolicy& policy);

/// Normal, expected and unexpected classes; pairwise normal-expected, normal-unexpected
/// and unexpected-expected. Without a model every cell is NOT_APPLICABLE.
OmnibusAnalysis run_expectedness_analysis(const GroupSet& groups, const GroupingPolicy& policy,
                                          bool model_supplied);

/// Normal against all pooled exception cases.
OmnibusAnalysis run_pooled_analysis(const GroupSet& groups, const GroupingPolicy& policy);

struct TypeFrequency {
    std::size_t exception_paths = 0;
    std::size_t exception_cases = 0;
    std::map<ExceptionType, double> per_path;  // fraction of distinct exception paths
    std::map<ExceptionType, double> per_case;  // fraction of exception cases
};

/// Distinct paths are identified by (scenario, variant), so the same call works for
/// one scenario or a whole process.
TypeFrequency type_frequency(std::span<const CaseRecord> cases);

struct PathCounts {
    std::size_t paths = 0;
    std::size_t cases = 0;
};

struct ScenarioResult {
    std::string label;
    std::size_t case_count = 0;
    Path normal_flow;
    std::optional<Expectedness> normal_flow_expectedness;
    PathCounts normal;
    PathCounts exceptions;
    PathCounts expected;    // model supplied only
    PathCounts unexpected;  // model supplied only
    PathCounts unalignable;
    TypeFrequency frequency;

    bool skipped = false;
    std::string skip_reason;

    GroupSet type_groups;
    OmnibusAnalysis type_analysis;
    std::optional<GroupStats> type_population;

    GroupSet expectedness_groups;
    OmnibusAnalysis expectedness_analysis;
    std::optional<GroupStats> expectedness_population;

    GroupSet pooled_groups;
    OmnibusAnalysis pooled_analysis;
};

/// Classifies every case of one scenario against its normal flow.
std::vector<CaseRecord> classify_scenario(const Scenario& scenario, const std::vector<Trace>& traces,
                                          const ProcessModel* model);

ScenarioResult analyze_scenario(const Scenario& scenario, std::span<const CaseRecord> cases,
                                const GroupingPolicy& policy, bool model_supplied);

enum class Verdict { Supported, Contradicted, Inconclusive };
const char* to_string(Verdict v);

struct TypeVerdict {
    ExceptionType type;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> evidence;
};

struct HypothesisVerdict {
    std::string id;  // H1 .. H4
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> evidence;
    std::vector<TypeVerdict> per_type;  // H3 and H4 only
};

/// Per-type vote over type-set cells. Cells in which the type appears alone fix its
/// direction; a paired cell pointing the other way is discounted when the partner
/// type belongs to the opposite family. Without solo evidence, paired cells must agree.
TypeVerdict type_verdict(ExceptionType type, std::span<const std::pair<std::string, DirectionCell>> cells);

std::vector<HypothesisVerdict> hypothesis_verdicts(std::span<const ScenarioResult> scenarios);

struct ProcessSummary {
    std::size_t cases = 0;
    Instant first_start;
    Instant last_end;
    GroupStats throughput;  // seconds
};

struct AnalysisResult {
    GroupingPolicy policy;
    bool model_supplied = false;
    ProcessSummary process;
    TopVariants top;
    std::size_t unlabeled_cases = 0;
    TypeFrequency frequency;                // process level
    std::vector<ScenarioResult> scenarios;  // label order
    std::vector<CaseRecord> cases;          // trace order
    std::vector<HypothesisVerdict> verdicts;

    /// True when no scenario reached any statistical test.
    [[nodiscard]] bool nothing_analyzed() const;
};

AnalysisResult analyze(const std::vector<Trace>& traces, const ScenarioPartition& partition,
                       const ProcessModel* model, const GroupingPolicy& policy, std::size_t top_k = 15);

}  // namespace exmine
