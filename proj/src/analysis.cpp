#include "exmine/analysis.hpp"

#include <algorithm>
#include <map>

#include "exmine/error.hpp"
#include "exmine/format.hpp"

namespace exmine {

void GroupingPolicy::validate() const {
    if (max_types < 1) throw InputError("max-types must be at least 1");
    if (min_group_size < 1) throw InputError("min-group must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
}

std::vector<double> GroupSet::pooled_samples() const {
    std::vector<double> out = normal.samples;
    for (const auto& g : exceptions) out.insert(out.end(), g.samples.begin(), g.samples.end());
    return out;
}

GroupSet build_groups(std::span<const CaseRecord> cases, const GroupingPolicy& policy, Grouping grouping) {
    GroupSet set;
    set.mode = grouping;
    set.normal.label = kNormalGroup;
    set.accounting.total = cases.size();

    std::map<std::string, Group> candidates;
    std::map<std::string, ExcludedGroup> filtered;
    auto exclude = [&](const std::string& label, const std::string& reason) {
        auto& e = filtered[label];
        e.label = label;
        e.reason = reason;
        ++e.size;
    };

    for (const auto& c : cases) {
        const ExceptionProfile& p = *c.profile;
        if (!p.alignable) {
            exclude("(unalignable)", "no activity in common with the normal flow");
            continue;
        }
        if (p.types.size() > policy.max_types) {
            exclude(p.types.join("+"), std::to_string(p.types.size()) + " exception types, at most " +
                                           std::to_string(policy.max_types) + " allowed");
            continue;
        }
        if (p.types.empty()) {
            set.normal.samples.push_back(c.throughput);
            continue;
        }
        std::string label;
        TypeSet types;
        switch (grouping) {
            case Grouping::ByTypeSet:
                label = p.types.join("+");
                types = p.types;
                break;
            case Grouping::ByExpectedness:
                if (!c.expectedness) {
                    exclude("(no model)", "expectedness unknown without a process model");
                    continue;
                }
                label = *c.expectedness == Expectedness::Expected ? kExpectedGroup : kUnexpectedGroup;
                break;
            case Grouping::NormalVsException:
                label = kExceptionGroup;
                break;
        }
        auto& g = candidates[label];
        g.label = label;
        g.types = types;
        g.samples.push_back(c.throughput);
    }

    for (auto& [label, e] : filtered) set.excluded.push_back(std::move(e));

    if (set.normal.samples.size() < policy.min_group_size) {
        set.skipped = true;
        set.skip_reason = "normal group has " + std::to_string(set.normal.samples.size()) +
                          " cases, at least " + std::to_string(policy.min_group_size) + " required";
        set.accounting.skipped = cases.size();
        return set;
    }

    set.accounting.eligible = set.normal.samples.size();
    for (auto& [label, g] : candidates) {
        if (g.samples.size() >= policy.min_group_size) {
            set.accounting.eligible += g.samples.size();
            set.exceptions.push_back(std::move(g));
        } else {
            set.excluded.push_back({label, g.samples.size(),
                                    "group size " + std::to_string(g.samples.size()) + " below minimum " +
                                        std::to_string(policy.min_group_size)});
        }
    }
    for (const auto& e : set.excluded) set.accounting.excluded += e.size;
    std::sort(set.excluded.begin(), set.excluded.end(),
              [](const ExcludedGroup& a, const ExcludedGroup& b) { return a.label < b.label; });
    return set;
}

namespace {

struct Comparison {
    std::size_t group;
    std::size_t versus;
    DirectionCell cell;
};

/// Runs the omnibus test over `samples` and the listed pairwise comparisons,
/// Bonferroni-adjusting over the comparisons performed.
void run_comparisons(const std::vector<std::vector<double>>& samples, std::vector<Comparison>& comparisons,
                     const GroupingPolicy& policy, OmnibusAnalysis& out) {
    const auto ctx = stats::rank_groups(samples);
    out.performed = true;
    out.omnibus = stats::kruskal_wallis(ctx);
    out.omnibus.direction = Direction::NotApplicable;

    std::vector<double> raw;
    std::vector<TestResult> tests;
    for (const auto& cmp : comparisons) {
        tests.push_back(stats::dunn_pairwise(ctx, cmp.group, cmp.versus));
        raw.push_back(tests.back().p_raw);
    }
    const auto adjusted = stats::adjust_bonferroni(raw, raw.size());
    for (std::size_t i = 0; i < comparisons.size(); ++i) {
        DirectionCell& cell = comparisons[i].cell;
        cell.statistic = tests[i].statistic;
        cell.p_raw = tests[i].p_raw;
        cell.p_adjusted = adjusted[i];
        const bool significant = adjusted[i] < policy.alpha && tests[i].statistic != 0.0;
        cell.direction = significant ? tests[i].direction : Direction::NotSignificant;
    }
}

}  // namespace

OmnibusAnalysis run_type_analysis(const GroupSet& groups, const GroupingPolicy& policy) {
    OmnibusAnalysis out;
    if (groups.skipped) {
        out.note = groups.skip_reason;
        return out;
    }
    if (groups.exceptions.empty()) {
        out.note = "no eligible exception group";
        return out;
    }
    std::vector<std::vector<double>> samples{groups.normal.samples};
    std::vector<Comparison> comparisons;
    for (std::size_t i = 0; i < groups.exceptions.size(); ++i) {
        const Group& g = groups.exceptions[i];
        samples.push_back(g.samples);
        DirectionCell cell;
        cell.group = g.label;
        cell.versus = kNormalGroup;
        cell.types = g.types;
        cell.group_size = g.samples.size();
        comparisons.push_back({i + 1, 0, cell});
    }
    run_comparisons(samples, comparisons, policy, out);
    for (auto& cmp : comparisons) out.cells.push_back(std::move(cmp.cell));
    return out;
}

OmnibusAnalysis run_expectedness_analysis(const GroupSet& groups, const GroupingPolicy& policy,
                                          bool model_supplied) {
    OmnibusAnalysis out;
    auto not_applicable = [&](const char* group, const char* versus, std::size_t size) {
        DirectionCell cell;
        cell.group = group;
        cell.versus = versus;
        cell.group_size = size;
        cell.direction = Direction::NotApplicable;
        return cell;
    };
    const Group* expected = nullptr;
    const Group* unexpected = nullptr;
    for (const auto& g : groups.exceptions) {
        if (g.label == kExpectedGroup) expected = &g;
        if (g.label == kUnexpectedGroup) unexpected = &g;
    }
    const std::size_t expected_size = expected ? expected->samples.size() : 0;
    const std::size_t unexpected_size = unexpected ? unexpected->samples.size() : 0;

    if (!model_supplied || groups.skipped || (!expected && !unexpected)) {
        out.note = !model_supplied ? "no model supplied"
                   : groups.skipped ? groups.skip_reason
                                    : "no eligible expected or unexpected group";
        out.cells = {not_applicable(kExpectedGroup, kNormalGroup, expected_size),
                     not_applicable(kUnexpectedGroup, kNormalGroup, unexpected_size),
                     not_applicable(kUnexpectedGroup, kExpectedGroup, unexpected_size)};
        return out;
    }

    std::vector<std::vector<double>> samples{groups.normal.samples};
    std::size_t expected_index = 0;
    std::size_t unexpected_index = 0;
    if (expected) {
        expected_index = samples.size();
        samples.push_back(expected->samples);
    }
    if (unexpected) {
        unexpected_index = samples.size();
        samples.push_back(unexpected->samples);
    }
    std::vector<Comparison> comparisons;
    std::vector<DirectionCell> cells(3);
    cells[0] = not_applicable(kExpectedGroup, kNormalGroup, expected_size);
    cells[1] = not_applicable(kUnexpectedGroup, kNormalGroup, unexpected_size);
    cells[2] = not_applicable(kUnexpectedGroup, kExpectedGroup, unexpected_size);
    std::vector<std::size_t> slots;
    if (expected) {
        comparisons.push_back({expected_index, 0, cells[0]});
        slots.push_back(0);
    }
    if (unexpected) {
        comparisons.push_back({unexpected_index, 0, cells[1]});
        slots.push_back(1);
    }
    if (expected && unexpected) {
        comparisons.push_back({unexpected_index, expected_index, cells[2]});
        slots.push_back(2);
    }
    run_comparisons(samples, comparisons, policy, out);
    for (std::size_t i = 0; i < comparisons.size(); ++i) cells[slots[i]] = comparisons[i].cell;
    out.cells = std::move(cells);
    return out;
}

OmnibusAnalysis run_pooled_analysis(const GroupSet& groups, const GroupingPolicy& policy) {
    OmnibusAnalysis out;
    if (groups.skipped) {
        out.note = groups.skip_reason;
        return out;
    }
    if (groups.exceptions.empty()) {
        out.note = "no eligible exception group";
        return out;
    }
    std::vector<std::vector<double>> samples{groups.normal.samples, groups.exceptions.front().samples};
    DirectionCell cell;
    cell.group = kExceptionGroup;
    cell.versus = kNormalGroup;
    cell.group_size = samples[1].size();
    std::vector<Comparison> comparisons{{1, 0, cell}};
    run_comparisons(samples, comparisons, policy, out);
    out.cells.push_back(std::move(comparisons.front().cell));
    return out;
}

TypeFrequency type_frequency(std::span<const CaseRecord> cases) {
    TypeFrequency f;
    std::map<std::pair<std::string, std::size_t>, const ExceptionProfile*> paths;
    std::map<ExceptionType, std::size_t> case_hits;
    for (const auto& c : cases) {
        if (c.is_normal()) continue;
        ++f.exception_cases;
        paths.emplace(std::make_pair(c.scenario, c.variant), c.profile.get());
        for (auto t : c.profile->types.members()) ++case_hits[t];
    }
    f.exception_paths = paths.size();
    std::map<ExceptionType, std::size_t> path_hits;
    for (const auto& [v, p] : paths) {
        for (auto t : p->types.members()) ++path_hits[t];
    }
    for (auto t : kAllExceptionTypes) {
        f.per_path[t] = f.exception_paths ? static_cast<double>(path_hits[t]) / static_cast<double>(f.exception_paths) : 0.0;
        f.per_case[t] = f.exception_cases ? static_cast<double>(case_hits[t]) / static_cast<double>(f.exception_cases) : 0.0;
    }
    return f;
}

std::vector<CaseRecord> classify_scenario(const Scenario& scenario, const std::vector<Trace>& traces,
                                          const ProcessModel* model) {
    std::map<Path, std::size_t> index;
    std::vector<std::shared_ptr<const ExceptionProfile>> profiles;
    std::vector<std::optional<Expectedness>> expectedness;
    for (std::size_t v = 0; v < scenario.variants.size(); ++v) {
        const Path& p = scenario.variants[v].path;
        index.emplace(p, v);
        profiles.push_back(std::make_shared<const ExceptionProfile>(classify_path(p, scenario.normal_flow)));
        expectedness.push_back(model ? std::optional(model->classify(p)) : std::nullopt);
    }
    std::vector<CaseRecord> out;
    out.reserve(scenario.traces.size());
    for (std::size_t t : scenario.traces) {
        const std::size_t v = index.at(traces[t].path);
        out.push_back(CaseRecord{t, v, scenario.label, profiles[v], expectedness[v], traces[t].throughput});
    }
    return out;
}

namespace {

GroupSet skipped_groups(Grouping mode, std::size_t total, const std::string& reason) {
    GroupSet g;
    g.mode = mode;
    g.skipped = true;
    g.skip_reason = reason;
    g.accounting.total = total;
    g.accounting.skipped = total;
    return g;
}

std::optional<GroupStats> population(const GroupSet& g) {
    if (g.skipped) return std::nullopt;
    const auto samples = g.pooled_samples();
    if (samples.empty()) return std::nullopt;
    return stats::descriptive_stats(samples);
}

}  // namespace

ScenarioResult analyze_scenario(const Scenario& scenario, std::span<const CaseRecord> cases,
                                const GroupingPolicy& policy, bool model_supplied) {
    ScenarioResult r;
    r.label = scenario.label;
    r.case_count = cases.size();
    r.normal_flow = scenario.normal_flow;

    std::map<std::size_t, std::pair<const CaseRecord*, std::size_t>> per_variant;
    for (const auto& c : cases) {
        auto& slot = per_variant[c.variant];
        slot.first = &c;
        ++slot.second;
    }
    for (const auto& [v, entry] : per_variant) {
        const auto& [rec, count] = entry;
        if (scenario.variants[v].path == scenario.normal_flow) {
            r.normal = {1, count};
            r.normal_flow_expectedness = rec->expectedness;
            continue;
        }
        ++r.exceptions.paths;
        r.exceptions.cases += count;
        if (!rec->profile->alignable) {
            ++r.unalignable.paths;
            r.unalignable.cases += count;
        }
        if (rec->expectedness) {
            PathCounts& pc = *rec->expectedness == Expectedness::Expected ? r.expected : r.unexpected;
            ++pc.paths;
            pc.cases += count;
        }
    }
    r.frequency = type_frequency(cases);

    if (scenario.label == kUnlabeledScenario) {
        r.skipped = true;
        r.skip_reason = "cases without an outcome label";
        r.type_groups = skipped_groups(Grouping::ByTypeSet, cases.size(), r.skip_reason);
        r.expectedness_groups = skipped_groups(Grouping::ByExpectedness, cases.size(), r.skip_reason);
        r.pooled_groups = skipped_groups(Grouping::NormalVsException, cases.size(), r.skip_reason);
    } else {
        r.type_groups = build_groups(cases, policy, Grouping::ByTypeSet);
        r.expectedness_groups = build_groups(cases, policy, Grouping::ByExpectedness);
        r.pooled_groups = build_groups(cases, policy, Grouping::NormalVsException);
        r.skipped = r.type_groups.skipped;
        r.skip_reason = r.type_groups.skip_reason;
    }
    r.type_analysis = run_type_analysis(r.type_groups, policy);
    r.expectedness_analysis = run_expectedness_analysis(r.expectedness_groups, policy, model_supplied);
    if (r.skipped) r.expectedness_analysis.note = r.skip_reason;
    r.pooled_analysis = run_pooled_analysis(r.pooled_groups, policy);
    r.type_population = population(r.type_groups);
    if (model_supplied) r.expectedness_population = population(r.expectedness_groups);
    return r;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Supported: return "SUPPORTED";
        case Verdict::Contradicted: return "CONTRADICTED";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

namespace {

Direction opposite(Direction d) {
    return d == Direction::Longer ? Direction::Shorter : Direction::Longer;
}

bool significant(const DirectionCell& c) {
    return c.direction == Direction::Longer || c.direction == Direction::Shorter;
}

std::string describe(const std::string& scenario, const DirectionCell& c) {
    return scenario + ": " + c.group + " vs " + c.versus + " " + stats::to_string(c.direction) +
           " (p_adj=" + format_number(c.p_adjusted) + ")";
}

Verdict vote(std::span<const std::pair<std::string, DirectionCell>> cells, Direction want,
             std::vector<std::string>& evidence) {
    std::size_t agree = 0;
    std::size_t oppose = 0;
    for (const auto& [scenario, c] : cells) {
        evidence.push_back(describe(scenario, c));
        if (c.direction == want) ++agree;
        if (c.direction == opposite(want)) ++oppose;
    }
    if (agree > 0 && oppose == 0) return Verdict::Supported;
    if (oppose > 0 && agree == 0) return Verdict::Contradicted;
    return Verdict::Inconclusive;
}

}  // namespace

TypeVerdict type_verdict(ExceptionType type, std::span<const std::pair<std::string, DirectionCell>> cells) {
    TypeVerdict out{type, Verdict::Inconclusive, {}};
    const Direction want = adds_work(type) ? Direction::Longer : Direction::Shorter;

    auto partner_opposes = [&](const DirectionCell& c) {
        for (auto t : c.types.members()) {
            if (t != type && adds_work(t) != adds_work(type)) return true;
        }
        return false;
    };

    std::size_t solo_agree = 0, solo_oppose = 0, paired_agree = 0, paired_oppose = 0;
    std::vector<const DirectionCell*> paired;
    for (const auto& [scenario, c] : cells) {
        if (!c.types.contains(type)) continue;
        out.evidence.push_back(describe(scenario, c));
        if (!significant(c)) continue;
        const bool agrees = c.direction == want;
        if (c.types.size() == 1) {
            (agrees ? solo_agree : solo_oppose)++;
        } else {
            (agrees ? paired_agree : paired_oppose)++;
            paired.push_back(&c);
        }
    }

    if (solo_agree + solo_oppose > 0) {
        if (solo_agree > 0 && solo_oppose > 0) return out;
        const Direction established = solo_agree > 0 ? want : opposite(want);
        for (const DirectionCell* c : paired) {
            if (c->direction != established && !partner_opposes(*c)) return out;
        }
        out.verdict = established == want ? Verdict::Supported : Verdict::Contradicted;
        return out;
    }
    if (paired_agree > 0 && paired_oppose == 0) out.verdict = Verdict::Supported;
    if (paired_oppose > 0 && paired_agree == 0) out.verdict = Verdict::Contradicted;
    return out;
}

std::vector<HypothesisVerdict> hypothesis_verdicts(std::span<const ScenarioResult> scenarios) {
    std::vector<std::pair<std::string, DirectionCell>> pooled, versus_expected, typed;
    for (const auto& s : scenarios) {
        for (const auto& c : s.pooled_analysis.cells) pooled.emplace_back(s.label, c);
        for (const auto& c : s.expectedness_analysis.cells) {
            if (c.group == kUnexpectedGroup && c.versus == kExpectedGroup && c.direction != Direction::NotApplicable) {
                versus_expected.emplace_back(s.label, c);
            }
        }
        for (const auto& c : s.type_analysis.cells) typed.emplace_back(s.label, c);
    }

    std::vector<HypothesisVerdict> out(4);
    out[0].id = "H1";
    out[0].verdict = vote(pooled, Direction::Longer, out[0].evidence);
    out[1].id = "H2";
    out[1].verdict = vote(versus_expected, Direction::Longer, out[1].evidence);

    auto family = [&](HypothesisVerdict& h, bool add_family) {
        std::size_t supported = 0, contradicted = 0;
        for (auto t : kAllExceptionTypes) {
            if (adds_work(t) != add_family) continue;
            TypeVerdict tv = type_verdict(t, typed);
            supported += tv.verdict == Verdict::Supported;
            contradicted += tv.verdict == Verdict::Contradicted;
            h.evidence.push_back(std::string(to_string(t)) + ": " + to_string(tv.verdict));
            h.per_type.push_back(std::move(tv));
        }
        if (supported > 0 && contradicted == 0) h.verdict = Verdict::Supported;
        else if (contradicted > 0 && supported == 0) h.verdict = Verdict::Contradicted;
        else h.verdict = Verdict::Inconclusive;
    };
    out[2].id = "H3";
    family(out[2], true);
    out[3].id = "H4";
    family(out[3], false);
    return out;
}

bool AnalysisResult::nothing_analyzed() const {
    return std::none_of(scenarios.begin(), scenarios.end(), [](const ScenarioResult& s) {
        return s.type_analysis.performed || s.pooled_analysis.performed || s.expectedness_analysis.performed;
    });
}

AnalysisResult analyze(const std::vector<Trace>& traces, const ScenarioPartition& partition,
                       const ProcessModel* model, const GroupingPolicy& policy, std::size_t top_k) {
    policy.validate();
    AnalysisResult res;
    res.policy = policy;
    res.model_supplied = model != nullptr;
    res.unlabeled_cases = partition.unlabeled_cases;
    res.process.cases = traces.size();
    if (!traces.empty()) {
        res.process.first_start = traces.front().start;
        res.process.last_end = traces.front().end;
        std::vector<double> throughput;
        throughput.reserve(traces.size());
        for (const auto& t : traces) {
            res.process.first_start = std::min(res.process.first_start, t.start);
            res.process.last_end = std::max(res.process.last_end, t.end);
            throughput.push_back(t.throughput);
        }
        res.process.throughput = stats::descriptive_stats(throughput);
    }
    res.top = top_k_variants(extract_variants(traces), top_k);

    for (const auto& scenario : partition.scenarios) {
        auto records = classify_scenario(scenario, traces, model);
        res.scenarios.push_back(analyze_scenario(scenario, records, policy, model != nullptr));
        res.cases.insert(res.cases.end(), std::make_move_iterator(records.begin()),
                         std::make_move_iterator(records.end()));
    }
    std::sort(res.cases.begin(), res.cases.end(),
              [](const CaseRecord& a, const CaseRecord& b) { return a.trace < b.trace; });
    res.frequency = type_frequency(res.cases);
    res.verdicts = hypothesis_verdicts(res.scenarios);
    return res;
}

}  // namespace exmine
