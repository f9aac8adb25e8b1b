#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "exmine/classifier.hpp"
#include "exmine/conformance.hpp"
#include "exmine/log.hpp"
#include "exmine/rng.hpp"

namespace exmine::synth {

/// Attribute column carrying the scenario name in generated logs.
inline constexpr const char* kOutcomeColumn = "outcome";

struct ScenarioSpec {
    std::string name;
    Path normal_flow;  // labels must be pairwise distinct
    std::size_t cases = 0;
    double normal_rate = 1.0;
    std::map<ExceptionType, double> rates;
};

struct SynthConfig {
    enum class DelayMode {
        PerActivity,  // every step draws Exp(mean_delay); throughput follows the path
        PerCase,      // one Exp(mean_delay * (|normal| - 1)) total per case, spread evenly
    };
    enum class Injection { Single, Pair };

    std::vector<ScenarioSpec> scenarios;
    double mean_delay_seconds = 86400.0;
    DelayMode delay_mode = DelayMode::PerActivity;
    Injection injection = Injection::Single;
    double pair_probability = 0.5;  // chance that an exceptional case gets a second type
    /// Mean of an exponential delay added to the last step of a case per injected type.
    std::map<ExceptionType, double> extra_delay_seconds;
    /// Types whose paths are written into the derived process model.
    TypeSet expected_types;
    /// Fresh labels for ADD / LATE_ENTRY / LATE_EXIT; must not occur in any normal flow.
    Path added_activities = {"Extra check", "Extra request", "Extra review"};
    Instant start = Instant::from_seconds(1'293'840'000);  // 2011-01-01T00:00:00Z
    double case_spacing_seconds = 3600.0;
    std::uint64_t seed = 1;

    /// Throws InputError on inconsistent rates, flows or means.
    void validate() const;
};

/// JSON configuration; see README for the schema.
SynthConfig parse_config(std::istream& in);
SynthConfig parse_config(const std::filesystem::path& file);

struct CaseTruth {
    std::string case_id;
    std::string scenario;
    TypeSet injected;
};

struct GeneratedLog {
    EventLog log;  // every case carries the `outcome` attribute
    std::vector<CaseTruth> truth;
};

/// Scenario i draws from Rng(seed + i). Same config, same output.
GeneratedLog generate_log(const SynthConfig& config);

/// Normal-flow edges plus the edges of every generated path whose injected types are
/// all in `expected_types`.
ProcessModel derive_model(const SynthConfig& config, const GeneratedLog& generated);

/// `case_id,activity,timestamp,outcome` with RFC 3339 UTC timestamps.
void write_log_csv(const EventLog& log, std::ostream& out);
/// `case_id,injected_types` with types ';'-joined in name order.
void write_truth_csv(const std::vector<CaseTruth>& truth, std::ostream& out);

/// Applies one structural edit of `type` to `path`. Returns false if the edit is not
/// possible on a path of this length.
bool inject(Path& path, ExceptionType type, exmine::Rng& rng, const Path& fresh_labels);

}  // namespace exmine::synth
