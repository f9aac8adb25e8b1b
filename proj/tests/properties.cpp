// Property tests: each law is checked on at least 1,000 generated instances.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "exmine/analysis.hpp"
#include "exmine/classifier.hpp"
#include "exmine/conformance.hpp"
#include "exmine/kernels.hpp"
#include "exmine/log.hpp"
#include "exmine/report.hpp"
#include "exmine/scenario.hpp"
#include "exmine/stats.hpp"
#include "exmine/synth.hpp"
#include "oracles.hpp"

using namespace exmine;

namespace {

constexpr int kInstances = 1000;

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    std::size_t uniform(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

    Path path(std::size_t min_len, std::size_t max_len, std::size_t alphabet) {
        Path p(uniform(min_len, max_len));
        for (auto& a : p) a = std::string(1, static_cast<char>('A' + uniform(0, alphabet - 1)));
        return p;
    }
    Path distinct_path(std::size_t len) {
        Path all;
        for (std::size_t i = 0; i < 12; ++i) all.push_back("a" + std::to_string(i));
        std::shuffle(all.begin(), all.end(), rng);
        all.resize(len);
        return all;
    }
    std::vector<double> distinct_values(std::size_t n) {
        std::set<double> seen;
        std::vector<double> out;
        while (out.size() < n) {
            const double v = std::exp(real(0.0, 8.0));
            if (seen.insert(v).second) out.push_back(v);
        }
        return out;
    }
};

std::vector<Trace> random_traces(Gen& g, std::size_t n) {
    std::vector<Trace> out;
    for (std::size_t i = 0; i < n; ++i) {
        Trace t;
        t.case_id = "c" + std::to_string(i);
        t.path = g.path(1, 5, 3);
        t.throughput = g.real(0, 100);
        out.push_back(std::move(t));
    }
    return out;
}

std::map<std::string, std::string> relabel_map(const std::vector<std::string>& labels, Gen& g, bool order_preserving) {
    std::vector<std::string> sorted(labels.begin(), labels.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::string> images;
    for (std::size_t i = 0; i < sorted.size(); ++i) images.push_back("z" + std::to_string(100 + i * 3));
    if (!order_preserving) std::shuffle(images.begin(), images.end(), g.rng);
    std::map<std::string, std::string> m;
    for (std::size_t i = 0; i < sorted.size(); ++i) m[sorted[i]] = images[i];
    return m;
}

Path relabel(const std::map<std::string, std::string>& m, const Path& p) {
    Path out;
    for (const auto& a : p) out.push_back(m.at(a));
    return out;
}

}  // namespace

TEST_CASE("variant tables: counts partition traces, shares normalize and never increase") {
    Gen g(1);
    for (int it = 0; it < kInstances; ++it) {
        const auto traces = random_traces(g, g.uniform(1, 60));
        const auto table = extract_variants(traces);
        std::size_t total = 0;
        double shares = 0;
        for (std::size_t i = 0; i < table.size(); ++i) {
            REQUIRE(table[i].case_count == table[i].case_ids.size());
            total += table[i].case_count;
            shares += table[i].case_share;
            if (i) REQUIRE(table[i].case_share <= table[i - 1].case_share);
        }
        REQUIRE(total == traces.size());
        REQUIRE(std::abs(shares - 1.0) <= 1e-9);
    }
}

TEST_CASE("build_traces ignores row order when timestamps are distinct; parsing is deterministic") {
    Gen g(2);
    for (int it = 0; it < kInstances; ++it) {
        struct Row {
            std::string c, a;
            long t;
        };
        std::vector<Row> rows;
        std::set<long> used;
        const std::size_t n = g.uniform(1, 25);
        for (std::size_t i = 0; i < n; ++i) {
            long t;
            do t = static_cast<long>(g.uniform(0, 100000)); while (!used.insert(t).second);
            rows.push_back({"c" + std::to_string(g.uniform(0, 4)), std::string(1, static_cast<char>('A' + g.uniform(0, 3))), t});
        }
        auto render = [&](const std::vector<Row>& rs) {
            std::string s = "case_id,activity,timestamp\n";
            for (const auto& r : rs) s += r.c + "," + r.a + "," + std::to_string(r.t) + "\n";
            return s;
        };
        auto traces_by_case = [](const std::string& text) {
            std::istringstream in(text);
            std::map<std::string, std::pair<Path, double>> m;
            for (const auto& t : build_traces(parse_event_log(in, LogSchema{}))) m[t.case_id] = {t.path, t.throughput};
            return m;
        };
        const auto a = render(rows);
        std::shuffle(rows.begin(), rows.end(), g.rng);
        REQUIRE(traces_by_case(a) == traces_by_case(render(rows)));
        std::istringstream in1(a), in2(a);
        const auto l1 = parse_event_log(in1, LogSchema{});
        const auto l2 = parse_event_log(in2, LogSchema{});
        REQUIRE(l1.cases.size() == l2.cases.size());
        for (std::size_t i = 0; i < l1.cases.size(); ++i) {
            REQUIRE(l1.cases[i].case_id == l2.cases[i].case_id);
            for (std::size_t k = 0; k < l1.cases[i].events.size(); ++k) {
                REQUIRE(l1.cases[i].events[k].timestamp == l2.cases[i].events[k].timestamp);
                REQUIRE(l1.cases[i].events[k].row_index == l2.cases[i].events[k].row_index);
            }
        }
    }
}

TEST_CASE("scenarios partition the traces and elect a most frequent member as normal flow") {
    Gen g(3);
    for (int it = 0; it < kInstances; ++it) {
        const auto traces = random_traces(g, g.uniform(1, 50));
        const auto part = assign_scenarios(traces, OutcomePolicy{});
        std::size_t total = 0;
        for (const auto& s : part.scenarios) {
            total += s.traces.size();
            bool member = false;
            std::size_t normal_count = 0;
            for (const auto& v : s.variants) {
                if (v.path == s.normal_flow) {
                    member = true;
                    normal_count = v.case_count;
                }
            }
            REQUIRE(member);
            for (const auto& v : s.variants) REQUIRE(normal_count >= v.case_count);
        }
        REQUIRE(total == traces.size());
    }
}

TEST_CASE("order-preserving relabeling maps the elected normal flow") {
    Gen g(4);
    for (int it = 0; it < kInstances; ++it) {
        auto traces = random_traces(g, g.uniform(1, 40));
        std::vector<std::string> labels;
        for (const auto& t : traces) labels.insert(labels.end(), t.path.begin(), t.path.end());
        const auto m = relabel_map(labels, g, true);
        auto relabeled = traces;
        for (auto& t : relabeled) t.path = relabel(m, t.path);
        const auto a = assign_scenarios(traces, OutcomePolicy{});
        const auto b = assign_scenarios(relabeled, OutcomePolicy{});
        REQUIRE(a.scenarios.size() == b.scenarios.size());
        for (std::size_t i = 0; i < a.scenarios.size(); ++i) {
            REQUIRE(relabel(m, a.scenarios[i].normal_flow) == b.scenarios[i].normal_flow);
        }
    }
}

TEST_CASE("adding model edges never turns an expected path unexpected") {
    Gen g(5);
    const std::vector<std::string> nodes{"A", "B", "C", "D"};
    for (int it = 0; it < kInstances; ++it) {
        std::set<ProcessModel::Edge> edges{{kModelStart, "A"}, {"D", kModelEnd}};
        for (const auto& a : nodes)
            for (const auto& b : nodes)
                if (g.uniform(0, 2) == 0) edges.emplace(a, b);
        const ProcessModel small(edges);
        auto more = edges;
        for (int k = 0; k < 3; ++k) {
            const auto& a = nodes[g.uniform(0, 3)];
            const auto& b = nodes[g.uniform(0, 3)];
            more.emplace(a, b);
        }
        more.emplace(kModelStart, nodes[g.uniform(0, 3)]);
        const ProcessModel big(more);
        for (int p = 0; p < 5; ++p) {
            const auto path = g.path(1, 6, 4);
            if (small.classify(path) == Expectedness::Expected) {
                REQUIRE(big.classify(path) == Expectedness::Expected);
            }
        }
    }
}

TEST_CASE("classifier: identity, conservation, type/record agreement, determinism") {
    Gen g(6);
    for (int it = 0; it < kInstances; ++it) {
        const Path normal = g.path(1, 7, 4);
        const Path path = g.path(1, 9, 5);
        REQUIRE(classify_path(normal, normal).is_normal());
        const auto p = classify_path(path, normal);
        const auto again = classify_path(path, normal);
        REQUIRE(p.records == again.records);
        REQUIRE(p.types == again.types);
        if (!p.alignable) {
            REQUIRE(p.types.empty());
            continue;
        }
        TypeSet kinds;
        std::size_t observed = p.matches;
        std::size_t normal_side = p.matches;
        for (const auto& r : p.records) {
            kinds.insert(r.kind);
            REQUIRE(r.position < path.size());
            switch (r.kind) {
                case ExceptionType::Repeat:
                case ExceptionType::StepBack:
                case ExceptionType::Add:
                case ExceptionType::LateEntry:
                case ExceptionType::LateExit: observed += r.activities.size(); break;
                default: normal_side += r.activities.size(); break;
            }
        }
        REQUIRE(kinds == p.types);
        REQUIRE(observed == path.size());
        REQUIRE(normal_side == normal.size());
        REQUIRE(p.types.empty() == (path == normal));
    }
}

TEST_CASE("classifier: invariant under any label bijection") {
    Gen g(7);
    for (int it = 0; it < kInstances; ++it) {
        const Path normal = g.path(1, 7, 4);
        const Path path = g.path(1, 9, 5);
        std::vector<std::string> labels(normal);
        labels.insert(labels.end(), path.begin(), path.end());
        const auto m = relabel_map(labels, g, false);
        const auto a = classify_path(path, normal);
        const auto b = classify_path(relabel(m, path), relabel(m, normal));
        REQUIRE(a.types == b.types);
        REQUIRE(a.alignable == b.alignable);
        REQUIRE(a.records.size() == b.records.size());
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            REQUIRE(a.records[i].kind == b.records[i].kind);
            REQUIRE(a.records[i].position == b.records[i].position);
            REQUIRE(relabel(m, a.records[i].activities) == b.records[i].activities);
        }
    }
}

TEST_CASE("reduce_repetitions reaches a repetition-free fixpoint") {
    Gen g(8);
    for (int it = 0; it < kInstances; ++it) {
        const Path path = g.path(1, 12, 3);
        const auto r = reduce_repetitions(path);
        for (std::size_t s = 0; s < r.reduced.size(); ++s)
            for (std::size_t len = 1; s + 2 * len <= r.reduced.size(); ++len)
                REQUIRE_FALSE(std::equal(r.reduced.begin() + s, r.reduced.begin() + s + len, r.reduced.begin() + s + len));
        std::size_t removed = 0;
        for (const auto& rec : r.records) removed += rec.activities.size();
        REQUIRE(removed + r.reduced.size() == path.size());
        for (std::size_t i = 0; i < r.reduced.size(); ++i) REQUIRE(path[r.origin[i]] == r.reduced[i]);
    }
}

TEST_CASE("align_lcs realizes a longest common subsequence with the documented tie-break") {
    Gen g(9);
    for (int it = 0; it < kInstances; ++it) {
        const Path a = g.path(1, 6, 3);
        const Path b = g.path(1, 6, 3);
        const auto ops = align_lcs(a, b);
        // Brute-force LCS length over all subsequences of a.
        std::size_t best = 0;
        for (std::size_t mask = 0; mask < (1u << a.size()); ++mask) {
            Path sub;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (mask >> i & 1) sub.push_back(a[i]);
            std::size_t j = 0;
            for (const auto& x : b)
                if (j < sub.size() && sub[j] == x) ++j;
            if (j == sub.size()) best = std::max(best, sub.size());
        }
        std::size_t matches = 0, ia = 0, ib = 0;
        for (const auto& op : ops) {
            if (op.kind == EditOp::Kind::Match) {
                REQUIRE(a[op.observed] == b[op.normal]);
                ++matches;
                ++ia;
                ++ib;
            } else if (op.kind == EditOp::Kind::Insert) {
                REQUIRE(op.observed == ia++);
            } else {
                REQUIRE(op.normal == ib++);
            }
        }
        REQUIRE(matches == best);
        REQUIRE(ia == a.size());
        REQUIRE(ib == b.size());
    }
}

TEST_CASE("synthetic single injections: never the normal flow, classified exactly") {
    Gen g(10);
    for (int it = 0; it < kInstances; ++it) {
        const Path normal = g.distinct_path(g.uniform(3, 8));
        const auto type = kAllExceptionTypes[g.uniform(0, 7)];
        Rng rng(static_cast<std::uint64_t>(it) + 1);
        Path p = normal;
        REQUIRE(synth::inject(p, type, rng, {"x1", "x2"}));
        REQUIRE(p != normal);
        REQUIRE(classify_path(p, normal).types == TypeSet{type});
    }
}

TEST_CASE("rank sums equal N(N+1)/2 exactly") {
    Gen g(11);
    for (int it = 0; it < kInstances; ++it) {
        std::vector<double> x(g.uniform(1, 200));
        for (auto& v : x) v = static_cast<double>(g.uniform(0, 20));
        const auto r = stats::rank_with_ties(x);
        double s = 0;
        for (double v : r) s += v;
        const double n = static_cast<double>(x.size());
        REQUIRE(s == n * (n + 1) / 2);
    }
}

TEST_CASE("Kruskal-Wallis: monotone-transform invariance, non-negativity, identical groups") {
    Gen g(12);
    for (int it = 0; it < kInstances; ++it) {
        const std::size_t k = g.uniform(2, 5);
        std::vector<std::vector<double>> groups(k), logged(k);
        for (std::size_t i = 0; i < k; ++i) {
            groups[i] = g.distinct_values(g.uniform(1, 12));
        }
        // distinct across groups too
        std::set<double> all;
        bool distinct = true;
        for (const auto& grp : groups)
            for (double v : grp) distinct &= all.insert(v).second;
        if (!distinct) continue;
        for (std::size_t i = 0; i < k; ++i)
            for (double v : groups[i]) logged[i].push_back(std::log1p(v));
        const auto h = stats::kruskal_wallis(groups);
        REQUIRE(h.statistic >= 0.0);
        REQUIRE(h.statistic == stats::kruskal_wallis(logged).statistic);
        REQUIRE(h.p_raw >= 0.0);
        REQUIRE(h.p_raw <= 1.0);
        const std::vector<std::vector<double>> twins{groups[0], groups[0]};
        REQUIRE(std::abs(stats::kruskal_wallis(twins).statistic) < 1e-12);
    }
}

TEST_CASE("k = 2 tie-free: Dunn z squared equals H; KW matches the textbook oracle") {
    Gen g(13);
    for (int it = 0; it < kInstances; ++it) {
        const auto v = g.distinct_values(g.uniform(2, 60));
        const std::size_t cut = g.uniform(1, v.size() - 1);
        const std::vector<std::vector<double>> groups{{v.begin(), v.begin() + static_cast<std::ptrdiff_t>(cut)},
                                                      {v.begin() + static_cast<std::ptrdiff_t>(cut), v.end()}};
        const auto ctx = stats::rank_groups(groups);
        const double h = stats::kruskal_wallis(ctx).statistic;
        const double z = stats::dunn_pairwise(ctx, 0, 1).statistic;
        REQUIRE(std::abs(z * z - h) < 1e-9);
        REQUIRE(std::abs(h - oracle::kruskal_h(groups)) < 1e-9 * std::max(1.0, h));
        REQUIRE(stats::dunn_pairwise(ctx, 1, 0).statistic == -z);
    }
}

TEST_CASE("tail functions are monotone and bounded; Bonferroni never lowers p") {
    Gen g(14);
    for (int it = 0; it < kInstances; ++it) {
        const double a = g.real(0, 40);
        const double b = a + g.real(0, 5);
        const int df = static_cast<int>(g.uniform(1, 10));
        REQUIRE(stats::chi2_sf(b, df) <= stats::chi2_sf(a, df));
        REQUIRE(stats::chi2_sf(a, df) <= 1.0);
        REQUIRE(stats::chi2_sf(b, df) >= 0.0);
        const double z = g.real(-8, 8);
        REQUIRE(stats::normal_sf(z + g.real(0, 2)) <= stats::normal_sf(z));
        std::vector<double> p(g.uniform(1, 10));
        for (auto& x : p) x = g.real(0, 1);
        const auto adj = stats::adjust_bonferroni(p, p.size() + g.uniform(0, 3));
        for (std::size_t i = 0; i < p.size(); ++i) {
            REQUIRE(adj[i] >= p[i]);
            REQUIRE(adj[i] <= 1.0);
        }
    }
}

TEST_CASE("reduction kernels: every supported ISA agrees with the scalar reference") {
    Gen g(15);
    for (int it = 0; it < kInstances; ++it) {
        std::vector<double> x(g.uniform(0, 300));
        for (auto& v : x) v = g.real(-1e5, 1e6);
        const double c = g.real(-10, 10);
        const double ref = kernels::scalar::sum(x);
        const auto ps = kernels::scalar::central_power_sums(x, c);
        for (auto isa : {kernels::Isa::Scalar, kernels::Isa::Avx2}) {
            if (!kernels::set_active_isa(isa)) continue;
            auto close = [](double u, double v) { return std::abs(u - v) <= 1e-9 * std::max(1.0, std::abs(v)); };
            REQUIRE(close(kernels::sum(x), ref));
            const auto q = kernels::central_power_sums(x, c);
            REQUIRE(close(q.s1, ps.s1));
            REQUIRE(close(q.s2, ps.s2));
            REQUIRE(close(q.s3, ps.s3));
            REQUIRE(close(q.s4, ps.s4));
        }
    }
}

namespace {

std::vector<CaseRecord> random_cases(Gen& g, std::size_t n, bool transform) {
    std::vector<std::shared_ptr<const ExceptionProfile>> profiles;
    const std::vector<TypeSet> sets{{},
                                    {ExceptionType::Add},
                                    {ExceptionType::Skip},
                                    {ExceptionType::Add, ExceptionType::Skip},
                                    {ExceptionType::Add, ExceptionType::Skip, ExceptionType::Repeat}};
    for (const auto& s : sets) {
        auto p = std::make_shared<ExceptionProfile>();
        p->types = s;
        profiles.push_back(p);
    }
    auto unalignable = std::make_shared<ExceptionProfile>();
    unalignable->alignable = false;
    profiles.push_back(unalignable);
    std::vector<CaseRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t v = g.uniform(0, profiles.size() - 1) * (g.uniform(0, 2) == 0 ? 0 : 1);
        CaseRecord c;
        c.trace = i;
        c.variant = v;
        c.scenario = "S";
        c.profile = profiles[v];
        c.expectedness = g.uniform(0, 1) ? Expectedness::Expected : Expectedness::Unexpected;
        const double base = std::exp(g.real(0, 3)) + 3.0 * static_cast<double>(v % 3);
        c.throughput = transform ? std::log1p(base) : base;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

TEST_CASE("grouping: exclusion accounting holds in every mode") {
    Gen g(16);
    GroupingPolicy policy;
    for (int it = 0; it < kInstances; ++it) {
        policy.min_group_size = g.uniform(1, 30);
        policy.max_types = g.uniform(1, 3);
        const auto cases = random_cases(g, g.uniform(0, 200), false);
        for (auto mode : {Grouping::ByTypeSet, Grouping::ByExpectedness, Grouping::NormalVsException}) {
            const auto set = build_groups(cases, policy, mode);
            const auto& a = set.accounting;
            REQUIRE(a.total == cases.size());
            REQUIRE(a.eligible + a.excluded + a.skipped == a.total);
            REQUIRE(set.pooled_samples().size() == (set.skipped ? set.normal.samples.size() : a.eligible));
        }
    }
}

TEST_CASE("analysis: log(1+x) on throughputs leaves every direction cell unchanged; tables are reproducible") {
    Gen g(17);
    GroupingPolicy policy;
    policy.min_group_size = 10;
    for (int it = 0; it < kInstances; ++it) {
        const std::uint64_t seed = g.rng();
        Gen a(seed), b(seed);
        const auto raw = random_cases(a, g.uniform(20, 150), false);
        const auto logged = random_cases(b, raw.size(), true);
        auto cells = [&](const std::vector<CaseRecord>& cases) {
            std::vector<std::pair<std::string, Direction>> out;
            const auto t = run_type_analysis(build_groups(cases, policy, Grouping::ByTypeSet), policy);
            for (const auto& c : t.cells) out.emplace_back(c.group, c.direction);
            const auto e = run_expectedness_analysis(build_groups(cases, policy, Grouping::ByExpectedness), policy, true);
            for (const auto& c : e.cells) out.emplace_back(c.group + c.versus, c.direction);
            const auto p = run_pooled_analysis(build_groups(cases, policy, Grouping::NormalVsException), policy);
            for (const auto& c : p.cells) out.emplace_back(c.group, c.direction);
            return out;
        };
        REQUIRE(cells(raw) == cells(logged));
        if (it % 10 == 0) {
            Scenario sc;
            sc.label = "S";
            sc.variants.resize(6);
            const auto r1 = analyze_scenario(sc, raw, policy, true);
            const auto r2 = analyze_scenario(sc, raw, policy, true);
            AnalysisResult x, y;
            x.scenarios = {r1};
            y.scenarios = {r2};
            x.verdicts = hypothesis_verdicts(x.scenarios);
            y.verdicts = hypothesis_verdicts(y.scenarios);
            REQUIRE(render_tables(x, {}) == render_tables(y, {}));
        }
    }
}
