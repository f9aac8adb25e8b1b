#include "exmine/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "exmine/csv.hpp"
#include "exmine/error.hpp"

namespace exmine::synth {
namespace {

std::size_t min_length_for(ExceptionType t) {
    switch (t) {
        case ExceptionType::Skip: return 3;
        case ExceptionType::EarlyExit:
        case ExceptionType::EarlyEntry:
        case ExceptionType::StepBack:
        case ExceptionType::Add: return 2;
        default: return 1;
    }
}

std::string pick_fresh(const Path& path, const Path& pool, Rng& rng) {
    std::vector<const std::string*> unused;
    for (const auto& label : pool) {
        if (std::find(path.begin(), path.end(), label) == path.end()) unused.push_back(&label);
    }
    if (unused.empty()) {
        for (std::size_t k = 1;; ++k) {
            std::string label = "Extra work " + std::to_string(k);
            if (std::find(path.begin(), path.end(), label) == path.end()) return label;
        }
    }
    return *unused[rng.below(unused.size())];
}

}  // namespace

bool inject(Path& path, ExceptionType type, Rng& rng, const Path& fresh_labels) {
    const std::size_t n = path.size();
    if (n < min_length_for(type)) return false;
    auto at = [&](std::size_t i) { return path.begin() + static_cast<std::ptrdiff_t>(i); };
    switch (type) {
        case ExceptionType::EarlyExit: {
            const std::size_t k = 1 + rng.below(std::min<std::size_t>(2, n - 1));
            path.erase(at(n - k), path.end());
            return true;
        }
        case ExceptionType::EarlyEntry: {
            const std::size_t k = 1 + rng.below(std::min<std::size_t>(2, n - 1));
            path.erase(path.begin(), at(k));
            return true;
        }
        case ExceptionType::Skip: {
            const std::size_t len = 1 + rng.below(std::min<std::size_t>(2, n - 2));
            const std::size_t start = 1 + rng.below(n - 1 - len);
            path.erase(at(start), at(start + len));
            return true;
        }
        case ExceptionType::Add: {
            const std::size_t pos = 1 + rng.below(n - 1);
            path.insert(at(pos), pick_fresh(path, fresh_labels, rng));
            return true;
        }
        case ExceptionType::LateEntry:
            path.insert(path.begin(), pick_fresh(path, fresh_labels, rng));
            return true;
        case ExceptionType::LateExit:
            path.push_back(pick_fresh(path, fresh_labels, rng));
            return true;
        case ExceptionType::Repeat: {
            const std::size_t i = rng.below(n);
            const std::string copy = path[i];
            path.insert(at(i + 1), copy);
            return true;
        }
        case ExceptionType::StepBack: {
            const std::size_t len = 2 + rng.below(std::min<std::size_t>(2, n - 1));
            const std::size_t start = rng.below(n - len + 1);
            const Path block(at(start), at(start + len));
            path.insert(at(start + len), block.begin(), block.end());
            return true;
        }
    }
    return false;
}

void SynthConfig::validate() const {
    if (scenarios.empty()) throw InputError("synth config: no scenarios");
    if (!(mean_delay_seconds > 0.0)) throw InputError("synth config: mean delay must be positive");
    if (!(case_spacing_seconds >= 0.0)) throw InputError("synth config: negative case spacing");
    if (!(pair_probability >= 0.0 && pair_probability <= 1.0)) {
        throw InputError("synth config: pair_probability outside [0, 1]");
    }
    for (const auto& [type, mean] : extra_delay_seconds) {
        if (!(mean >= 0.0)) throw InputError("synth config: negative extra delay");
    }
    std::set<std::string> names;
    for (const auto& s : scenarios) {
        if (s.name.empty() || !names.insert(s.name).second) {
            throw InputError("synth config: scenario names must be unique and non-empty");
        }
        if (s.normal_flow.empty()) throw InputError("synth config: empty normal flow in " + s.name);
        const std::set<std::string> labels(s.normal_flow.begin(), s.normal_flow.end());
        if (labels.size() != s.normal_flow.size()) {
            throw InputError("synth config: normal flow of " + s.name + " repeats a label");
        }
        for (const auto& fresh : added_activities) {
            if (labels.count(fresh)) {
                throw InputError("synth config: added activity '" + fresh + "' occurs in a normal flow");
            }
        }
        double total = s.normal_rate;
        if (!(s.normal_rate >= 0.0 && s.normal_rate <= 1.0)) {
            throw InputError("synth config: rate outside [0, 1] in " + s.name);
        }
        for (const auto& [type, rate] : s.rates) {
            if (!(rate >= 0.0 && rate <= 1.0)) {
                throw InputError("synth config: rate outside [0, 1] in " + s.name);
            }
            if (rate > 0.0 && s.normal_flow.size() < min_length_for(type)) {
                throw InputError("synth config: normal flow of " + s.name + " too short for " +
                                 std::string(to_string(type)));
            }
            total += rate;
        }
        if (std::fabs(total - 1.0) > 1e-9) {
            throw InputError("synth config: rates of " + s.name + " do not sum to 1");
        }
    }
}

namespace {

ExceptionType type_from_json(const std::string& name) {
    const auto t = parse_exception_type(name);
    if (!t) throw InputError("synth config: unknown exception type '" + name + "'");
    return *t;
}

}  // namespace

SynthConfig parse_config(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("synth config: ") + e.what());
    }
    SynthConfig c;
    try {
        c.seed = j.value("seed", c.seed);
        c.mean_delay_seconds = j.value("mean_delay_seconds", c.mean_delay_seconds);
        const std::string mode = j.value("delay_mode", std::string("per_activity"));
        if (mode == "per_activity") {
            c.delay_mode = SynthConfig::DelayMode::PerActivity;
        } else if (mode == "per_case") {
            c.delay_mode = SynthConfig::DelayMode::PerCase;
        } else {
            throw InputError("synth config: unknown delay_mode '" + mode + "'");
        }
        const std::string injection = j.value("injection", std::string("single"));
        if (injection == "single") {
            c.injection = SynthConfig::Injection::Single;
        } else if (injection == "pair") {
            c.injection = SynthConfig::Injection::Pair;
        } else {
            throw InputError("synth config: unknown injection '" + injection + "'");
        }
        c.pair_probability = j.value("pair_probability", c.pair_probability);
        c.case_spacing_seconds = j.value("case_spacing_seconds", c.case_spacing_seconds);
        if (j.contains("start")) {
            const auto start = parse_rfc3339(j.at("start").get<std::string>());
            if (!start) throw InputError("synth config: bad start timestamp");
            c.start = *start;
        }
        if (j.contains("added_activities")) c.added_activities = j.at("added_activities").get<Path>();
        if (j.contains("extra_delay_seconds")) {
            for (const auto& [name, v] : j.at("extra_delay_seconds").items()) {
                c.extra_delay_seconds[type_from_json(name)] = v.get<double>();
            }
        }
        if (j.contains("expected_types")) {
            for (const auto& name : j.at("expected_types")) {
                c.expected_types.insert(type_from_json(name.get<std::string>()));
            }
        }
        for (const auto& js : j.at("scenarios")) {
            ScenarioSpec s;
            s.name = js.at("name").get<std::string>();
            s.normal_flow = js.at("normal_flow").get<Path>();
            s.cases = js.at("cases").get<std::size_t>();
            s.normal_rate = 0.0;
            for (const auto& [name, v] : js.at("rates").items()) {
                if (name == "normal") {
                    s.normal_rate = v.get<double>();
                } else {
                    s.rates[type_from_json(name)] = v.get<double>();
                }
            }
            c.scenarios.push_back(std::move(s));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("synth config: ") + e.what());
    }
    c.validate();
    return c;
}

SynthConfig parse_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open synth config '" + file.string() + "'");
    return parse_config(in);
}

namespace {

/// Categorical draw over normal + typed rates; nullopt means the normal flow.
std::optional<ExceptionType> draw_category(const ScenarioSpec& s, Rng& rng) {
    double u = rng.uniform();
    if (u < s.normal_rate) return std::nullopt;
    u -= s.normal_rate;
    std::optional<ExceptionType> last;
    for (const auto& [type, rate] : s.rates) {
        if (rate <= 0.0) continue;
        last = type;
        if (u < rate) return type;
        u -= rate;
    }
    return last;  // rounding slack lands on the last positive rate
}

std::optional<ExceptionType> draw_partner(const ScenarioSpec& s, ExceptionType first, Rng& rng) {
    double total = 0.0;
    for (const auto& [type, rate] : s.rates) {
        if (type != first) total += rate;
    }
    if (total <= 0.0) return std::nullopt;
    double u = rng.uniform() * total;
    std::optional<ExceptionType> last;
    for (const auto& [type, rate] : s.rates) {
        if (type == first || rate <= 0.0) continue;
        last = type;
        if (u < rate) return type;
        u -= rate;
    }
    return last;
}

}  // namespace

GeneratedLog generate_log(const SynthConfig& config) {
    config.validate();
    GeneratedLog out;
    out.log.source = "synthetic";
    std::size_t global_case = 0;
    std::size_t row = 1;

    for (std::size_t si = 0; si < config.scenarios.size(); ++si) {
        const ScenarioSpec& spec = config.scenarios[si];
        Rng rng(config.seed + si);
        const double normal_total =
            config.mean_delay_seconds * static_cast<double>(std::max<std::size_t>(1, spec.normal_flow.size() - 1));

        for (std::size_t ci = 0; ci < spec.cases; ++ci, ++global_case) {
            Path path = spec.normal_flow;
            TypeSet injected;
            if (const auto first = draw_category(spec, rng)) {
                std::vector<ExceptionType> types{*first};
                if (config.injection == SynthConfig::Injection::Pair &&
                    rng.uniform() < config.pair_probability) {
                    if (const auto second = draw_partner(spec, *first, rng)) types.push_back(*second);
                }
                for (int attempt = 0; attempt < 64; ++attempt) {
                    Path edited = spec.normal_flow;
                    TypeSet applied;
                    for (auto t : types) {
                        if (inject(edited, t, rng, config.added_activities)) applied.insert(t);
                    }
                    if (edited != spec.normal_flow && !edited.empty()) {
                        path = std::move(edited);
                        injected = applied;
                        break;
                    }
                }
            }

            const std::string case_id = "case-" + std::to_string(si + 1) + "-" + std::to_string(ci + 1);
            CaseEvents ce{case_id, {}, {{kOutcomeColumn, spec.name}}};

            std::vector<double> steps(path.size() > 1 ? path.size() - 1 : 0, 0.0);
            if (config.delay_mode == SynthConfig::DelayMode::PerActivity) {
                for (auto& s : steps) s = rng.exponential(config.mean_delay_seconds);
            } else {
                const double total = rng.exponential(normal_total);
                for (auto& s : steps) s = total / static_cast<double>(steps.size());
            }
            for (auto t : injected.members()) {
                const auto it = config.extra_delay_seconds.find(t);
                if (it != config.extra_delay_seconds.end() && it->second > 0.0 && !steps.empty()) {
                    steps.back() += rng.exponential(it->second);
                }
            }

            const double case_start =
                config.start.seconds() + config.case_spacing_seconds * static_cast<double>(global_case);
            double t = case_start;
            for (std::size_t k = 0; k < path.size(); ++k) {
                if (k > 0) t += steps[k - 1];
                ce.events.push_back(
                    Event{case_id, path[k], Instant::from_seconds(static_cast<std::int64_t>(std::floor(t))), row++});
            }
            out.log.cases.push_back(std::move(ce));
            out.truth.push_back(CaseTruth{case_id, spec.name, injected});
        }
    }
    out.log.row_count = row - 1;
    return out;
}

ProcessModel derive_model(const SynthConfig& config, const GeneratedLog& generated) {
    std::set<ProcessModel::Edge> edges;
    auto add_walk = [&](const Path& p) {
        if (p.empty()) return;
        edges.emplace(kModelStart, p.front());
        for (std::size_t i = 0; i + 1 < p.size(); ++i) edges.emplace(p[i], p[i + 1]);
        edges.emplace(p.back(), kModelEnd);
    };
    for (const auto& s : config.scenarios) add_walk(s.normal_flow);
    for (std::size_t i = 0; i < generated.truth.size(); ++i) {
        const TypeSet injected = generated.truth[i].injected;
        if (injected.empty()) continue;
        if ((injected.bits() & ~config.expected_types.bits()) != 0) continue;
        Path p;
        for (const auto& ev : generated.log.cases[i].events) p.push_back(ev.activity);
        add_walk(p);
    }
    return ProcessModel(std::move(edges));
}

void write_log_csv(const EventLog& log, std::ostream& out) {
    out << "case_id,activity,timestamp," << kOutcomeColumn << '\n';
    for (const auto& ce : log.cases) {
        const auto it = ce.attributes.find(kOutcomeColumn);
        const std::string outcome = it == ce.attributes.end() ? std::string() : it->second;
        for (const auto& ev : ce.events) {
            out << csv::join_row({ev.case_id, ev.activity, format_rfc3339(ev.timestamp), outcome}) << '\n';
        }
    }
}

void write_truth_csv(const std::vector<CaseTruth>& truth, std::ostream& out) {
    out << "case_id,injected_types\n";
    for (const auto& t : truth) out << csv::join_row({t.case_id, t.injected.join(";")}) << '\n';
}

}  // namespace exmine::synth
