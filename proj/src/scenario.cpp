#include "exmine/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "exmine/error.hpp"

namespace exmine {
namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

void OutcomePolicy::validate() const {
    if (mode == Mode::MarkerSet && markers.empty()) {
        throw InputError("outcome policy: marker_set mode needs at least one marker");
    }
    if (mode == Mode::CaseAttribute && attribute.empty()) {
        throw InputError("outcome policy: case_attribute mode needs an attribute name");
    }
}

OutcomePolicy parse_outcome_policy(std::istream& in) {
    OutcomePolicy policy;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("outcome policy: expected key=value", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "mode") {
            if (value == "last_activity") {
                policy.mode = OutcomePolicy::Mode::LastActivity;
            } else if (value == "marker_set") {
                policy.mode = OutcomePolicy::Mode::MarkerSet;
            } else if (value == "case_attribute") {
                policy.mode = OutcomePolicy::Mode::CaseAttribute;
            } else {
                throw InputError("outcome policy: unknown mode '" + value + "'", line_no);
            }
        } else if (key.rfind("marker.", 0) == 0) {
            const std::string activity = trim(key.substr(7));
            if (activity.empty() || value.empty()) {
                throw InputError("outcome policy: empty marker activity or outcome", line_no);
            }
            policy.markers[activity] = value;
        } else if (key == "attribute") {
            policy.attribute = value;
        } else {
            throw InputError("outcome policy: unknown key '" + key + "'", line_no);
        }
    }
    policy.validate();
    return policy;
}

OutcomePolicy parse_outcome_policy(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open outcome policy '" + file.string() + "'");
    return parse_outcome_policy(in);
}

std::string outcome_label(const Trace& trace, const OutcomePolicy& policy) {
    switch (policy.mode) {
        case OutcomePolicy::Mode::LastActivity:
            return trace.path.empty() ? kUnlabeledScenario : trace.path.back();
        case OutcomePolicy::Mode::MarkerSet: {
            std::set<std::string> outcomes;
            for (const auto& activity : trace.path) {
                if (auto it = policy.markers.find(activity); it != policy.markers.end()) {
                    outcomes.insert(it->second);
                }
            }
            if (outcomes.empty()) return kUnlabeledScenario;
            std::string label;
            for (const auto& o : outcomes) {
                if (!label.empty()) label += '+';
                label += o;
            }
            return label;
        }
        case OutcomePolicy::Mode::CaseAttribute: {
            const auto it = trace.attributes.find(policy.attribute);
            if (it == trace.attributes.end() || it->second.empty()) return kUnlabeledScenario;
            return it->second;
        }
    }
    return kUnlabeledScenario;
}

Path select_normal_flow(const VariantTable& variants) {
    if (variants.empty()) throw AnalysisError("select_normal_flow: empty variant table");
    const auto best = std::min_element(variants.begin(), variants.end(), variant_before);
    return best->path;
}

ScenarioPartition assign_scenarios(const std::vector<Trace>& traces, const OutcomePolicy& policy) {
    policy.validate();
    std::map<std::string, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        buckets[outcome_label(traces[i], policy)].push_back(i);
    }
    ScenarioPartition out;
    for (auto& [label, members] : buckets) {
        std::vector<Trace> subset;
        subset.reserve(members.size());
        for (std::size_t i : members) subset.push_back(traces[i]);
        Scenario s;
        s.label = label;
        s.variants = extract_variants(subset);
        s.normal_flow = select_normal_flow(s.variants);
        s.traces = std::move(members);
        if (label == kUnlabeledScenario) out.unlabeled_cases = s.traces.size();
        out.scenarios.push_back(std::move(s));
    }
    return out;
}

}  // namespace exmine
