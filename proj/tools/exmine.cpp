// exmine: exception mining over business-process event logs.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "exmine/analysis.hpp"
#include "exmine/csv.hpp"
#include "exmine/error.hpp"
#include "exmine/pipeline.hpp"
#include "exmine/synth.hpp"

namespace {

using namespace exmine;

struct CommonOptions {
    std::string log;
    std::string outcome;
    std::string model;
    std::string case_col = "case_id";
    std::string activity_col = "activity";
    std::string timestamp_col = "timestamp";
    std::vector<std::string> attributes;
    std::string completed_from;
    std::string completed_to;
};

void add_log_options(CLI::App* cmd, CommonOptions& o, bool with_model) {
    cmd->add_option("--log", o.log, "Event log CSV")->required();
    cmd->add_option("--outcome", o.outcome, "Outcome policy file (default: last activity)");
    if (with_model) cmd->add_option("--model", o.model, "Process model file (A -> B per line)");
    cmd->add_option("--case-col", o.case_col, "Case id column")->capture_default_str();
    cmd->add_option("--activity-col", o.activity_col, "Activity column")->capture_default_str();
    cmd->add_option("--timestamp-col", o.timestamp_col, "Timestamp column")->capture_default_str();
    cmd->add_option("--attr", o.attributes, "Extra column kept as a case attribute (repeatable)");
    cmd->add_option("--completed-from", o.completed_from, "Keep cases completing at or after this instant");
    cmd->add_option("--completed-to", o.completed_to, "Keep cases completing before this instant");
}

std::optional<Instant> parse_bound(const std::string& text, const char* flag) {
    if (text.empty()) return std::nullopt;
    const auto t = parse_timestamp(text, detect_timestamp_format(text));
    if (!t) throw InputError(std::string("bad timestamp for ") + flag + ": '" + text + "'");
    return t;
}

RunConfig to_run_config(const CommonOptions& o) {
    RunConfig c;
    c.log_path = o.log;
    if (!o.outcome.empty()) c.outcome_path = o.outcome;
    if (!o.model.empty()) c.model_path = o.model;
    c.schema.case_column = o.case_col;
    c.schema.activity_column = o.activity_col;
    c.schema.timestamp_column = o.timestamp_col;
    c.schema.attribute_columns = o.attributes;
    c.completed_from = parse_bound(o.completed_from, "--completed-from");
    c.completed_to = parse_bound(o.completed_to, "--completed-to");
    return c;
}

/// Opens `path` for writing, or returns std::cout for "" / "-".
std::ostream& output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary | std::ios::trunc);
    if (!file) throw InputError("cannot write '" + path + "'");
    return file;
}

int cmd_variants(const CommonOptions& o, std::size_t top, const std::string& out_path) {
    const LoadedInputs in = load_inputs(to_run_config(o));
    std::ofstream file;
    std::ostream& out = output(out_path, file);
    out << "scenario,rank,case_count,case_share,length,path\n";
    auto emit = [&](const std::string& scenario, const VariantTable& table) {
        const TopVariants tv = top_k_variants(table, top);
        for (const auto& row : tv.rows) {
            out << csv::join_row({scenario, std::to_string(row.rank), std::to_string(row.case_count),
                                  format_number(row.case_share), std::to_string(row.path.size()),
                                  format_path(row.path)})
                << '\n';
        }
        std::cerr << scenario << ": " << table.size() << " variants, fraction below 1% of cases "
                  << format_number(tv.tail_fraction) << '\n';
    };
    emit("*", extract_variants(in.traces));
    if (!o.outcome.empty()) {
        for (const auto& s : in.partition.scenarios) emit(s.label, s.variants);
    }
    return kExitOk;
}

int cmd_classify(const CommonOptions& o, const std::string& out_path) {
    const LoadedInputs in = load_inputs(to_run_config(o));
    const ProcessModel* model = in.model ? &*in.model : nullptr;
    std::vector<CaseRecord> records;
    for (const auto& s : in.partition.scenarios) {
        auto part = classify_scenario(s, in.traces, model);
        records.insert(records.end(), part.begin(), part.end());
    }
    std::sort(records.begin(), records.end(),
              [](const CaseRecord& a, const CaseRecord& b) { return a.trace < b.trace; });
    std::ofstream file;
    std::ostream& out = output(out_path, file);
    out << "case_id,scenario,types,alignable,expectedness\n";
    for (const auto& r : records) {
        const bool normal = r.is_normal();
        out << csv::join_row({in.traces[r.trace].case_id, r.scenario, r.profile->types.join(";"),
                              r.profile->alignable ? "true" : "false",
                              r.expectedness ? (normal ? "normal" : to_string(*r.expectedness)) : ""})
            << '\n';
    }
    return kExitOk;
}

int cmd_synth(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out_path,
              const std::string& truth_path, const std::string& model_path) {
    synth::SynthConfig config = synth::parse_config(std::filesystem::path(config_path));
    if (seed) config.seed = *seed;
    const auto generated = synth::generate_log(config);
    {
        std::ofstream file;
        synth::write_log_csv(generated.log, output(out_path, file));
    }
    if (!truth_path.empty()) {
        std::ofstream file;
        synth::write_truth_csv(generated.truth, output(truth_path, file));
    }
    if (!model_path.empty()) {
        std::ofstream file;
        output(model_path, file) << format_model(synth::derive_model(config, generated));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exmine: exceptions in process event logs and their relation to throughput time"};
    app.require_subcommand(1);

    CommonOptions analyze_opts;
    GroupingPolicy policy;
    std::size_t analyze_top = 15;
    std::string unit_name = "days";
    std::string out_dir;
    auto* analyze = app.add_subcommand("analyze", "Full analysis and report bundle");
    add_log_options(analyze, analyze_opts, true);
    analyze->add_option("--alpha", policy.alpha, "Significance level")->capture_default_str();
    analyze->add_option("--min-group", policy.min_group_size, "Minimum cases per group")->capture_default_str();
    analyze->add_option("--max-types", policy.max_types, "Maximum exception types per case")->capture_default_str();
    analyze->add_option("--top", analyze_top, "Paths listed in figure2.csv")->capture_default_str();
    analyze->add_option("--unit", unit_name, "Display unit: seconds|minutes|hours|days|weeks")->capture_default_str();
    analyze->add_option("--out", out_dir, "Output directory")->required();

    CommonOptions variants_opts;
    std::size_t variants_top = 15;
    std::string variants_out;
    auto* variants = app.add_subcommand("variants", "Ranked path variants");
    add_log_options(variants, variants_opts, false);
    variants->add_option("--top", variants_top, "Variants listed per scope")->capture_default_str();
    variants->add_option("--out", variants_out, "Output CSV (default stdout)");

    CommonOptions classify_opts;
    std::string classify_out;
    auto* classify = app.add_subcommand("classify", "Exception types per case");
    add_log_options(classify, classify_opts, true);
    classify->add_option("--out", classify_out, "Output CSV (default stdout)");

    std::string synth_config, synth_out, synth_truth, synth_model;
    std::optional<std::uint64_t> synth_seed;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic log with known exceptions");
    synth_cmd->add_option("--config", synth_config, "JSON generator config")->required();
    synth_cmd->add_option("--seed", synth_seed, "Seed (overrides the config)");
    synth_cmd->add_option("--out", synth_out, "Event log CSV")->required();
    synth_cmd->add_option("--truth", synth_truth, "Injected types per case CSV");
    synth_cmd->add_option("--model-out", synth_model, "Derived process model");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (*analyze) {
            RunConfig config = to_run_config(analyze_opts);
            config.policy = policy;
            config.top_k = analyze_top;
            config.out_dir = out_dir;
            const auto unit = parse_duration_unit(unit_name);
            if (!unit) throw InputError("unknown unit '" + unit_name + "'");
            config.unit = *unit;
            const int status = run_pipeline(config);
            if (status == kExitNothingAnalyzed) {
                std::cerr << "exmine: no scenario had enough cases for analysis; see summary.json\n";
            }
            return status;
        }
        if (*variants) {
            if (variants_top == 0) throw InputError("--top must be at least 1");
            return cmd_variants(variants_opts, variants_top, variants_out);
        }
        if (*classify) return cmd_classify(classify_opts, classify_out);
        if (*synth_cmd) return cmd_synth(synth_config, synth_seed, synth_out, synth_truth, synth_model);
    } catch (const InputError& e) {
        std::cerr << "exmine: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "exmine: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitOk;
}
