#include "exmine/pipeline.hpp"

#include <algorithm>

#include "exmine/error.hpp"
#include "exmine/report.hpp"

namespace exmine {

LoadedInputs load_inputs(const RunConfig& config) {
    LoadedInputs in;
    if (config.outcome_path) in.outcome = parse_outcome_policy(*config.outcome_path);
    LogSchema schema = config.schema;
    if (in.outcome.mode == OutcomePolicy::Mode::CaseAttribute && !schema.keep_all_attributes &&
        std::find(schema.attribute_columns.begin(), schema.attribute_columns.end(), in.outcome.attribute) ==
            schema.attribute_columns.end()) {
        schema.attribute_columns.push_back(in.outcome.attribute);
    }
    if (config.model_path) in.model = parse_model(*config.model_path);
    const EventLog log = parse_event_log(config.log_path, schema);
    in.traces = filter_by_completion(build_traces(log), config.completed_from, config.completed_to);
    in.partition = assign_scenarios(in.traces, in.outcome);
    return in;
}

int run_pipeline(const RunConfig& config, AnalysisResult* result_out) {
    config.policy.validate();
    if (config.top_k == 0) throw InputError("--top must be at least 1");
    const LoadedInputs in = load_inputs(config);
    AnalysisResult result =
        analyze(in.traces, in.partition, in.model ? &*in.model : nullptr, config.policy, config.top_k);
    const int status = result.nothing_analyzed() ? kExitNothingAnalyzed : kExitOk;
    ReportOptions options;
    options.process_name = config.log_path.filename().string();
    options.unit = config.unit;
    write_report(result, options, config.out_dir, status);
    if (result_out) *result_out = std::move(result);
    return status;
}

}  // namespace exmine
