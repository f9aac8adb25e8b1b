#include "exmine/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "exmine/error.hpp"
#include "exmine/kernels.hpp"

namespace exmine::stats {

const char* to_string(Direction d) {
    switch (d) {
        case Direction::Longer: return "LONGER";
        case Direction::Shorter: return "SHORTER";
        case Direction::NotSignificant: return "NOT_SIGNIFICANT";
        case Direction::NotApplicable: return "NOT_APPLICABLE";
    }
    return "?";
}

namespace {

bool all_equal(std::span<const double> x) {
    return std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end();
}

double mean_of(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double m = kernels::sum(x) / n;
    // one correction pass against rounding in the plain sum
    return m + kernels::central_power_sums(x, m).s1 / n;
}

}  // namespace

GroupStats descriptive_stats(std::span<const double> samples) {
    if (samples.empty()) throw AnalysisError("descriptive_stats: empty sample");
    GroupStats g;
    g.n = samples.size();
    if (all_equal(samples)) {
        g.mean = samples.front();
        return g;
    }
    g.mean = mean_of(samples);
    const double n = static_cast<double>(g.n);
    const auto p = kernels::central_power_sums(samples, g.mean);
    if (g.n < 2) return g;
    g.std = std::sqrt(p.s2 / (n - 1.0));
    if (g.std == 0.0) return g;
    const double s2 = g.std * g.std;
    if (g.n >= 3) {
        g.skewness = n / ((n - 1.0) * (n - 2.0)) * (p.s3 / (s2 * g.std));
    }
    if (g.n >= 4) {
        g.kurtosis = n * (n + 1.0) / ((n - 1.0) * (n - 2.0) * (n - 3.0)) * (p.s4 / (s2 * s2)) -
                     3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
    }
    return g;
}

namespace {

struct Ranking {
    std::vector<double> ranks;
    double tie_term = 0.0;
};

Ranking rank_impl(std::span<const double> pooled) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
    Ranking r;
    r.ranks.resize(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && pooled[order[j]] == pooled[order[i]]) ++j;
        // positions i+1 .. j share their average
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t q = i; q < j; ++q) r.ranks[order[q]] = mid;
        const double t = static_cast<double>(j - i);
        r.tie_term += t * t * t - t;
        i = j;
    }
    return r;
}

}  // namespace

std::vector<double> rank_with_ties(std::span<const double> pooled) {
    if (pooled.empty()) throw AnalysisError("rank_with_ties: empty input");
    return rank_impl(pooled).ranks;
}

RankContext rank_groups(std::span<const std::vector<double>> groups) {
    if (groups.size() < 2) throw AnalysisError("rank test needs at least two groups");
    std::vector<double> pooled;
    RankContext ctx;
    for (const auto& g : groups) {
        if (g.empty()) throw AnalysisError("rank test with an empty group");
        ctx.sizes.push_back(g.size());
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    ctx.total = pooled.size();
    const Ranking r = rank_impl(pooled);
    ctx.tie_term = r.tie_term;
    std::size_t offset = 0;
    for (std::size_t size : ctx.sizes) {
        double s = 0.0;
        for (std::size_t q = offset; q < offset + size; ++q) s += r.ranks[q];
        ctx.rank_sums.push_back(s);
        offset += size;
    }
    return ctx;
}

TestResult kruskal_wallis(const RankContext& ctx) {
    const double N = static_cast<double>(ctx.total);
    TestResult res;
    res.df = static_cast<int>(ctx.sizes.size()) - 1;
    const double correction = 1.0 - ctx.tie_term / (N * N * N - N);
    if (correction <= 0.0) {
        res.statistic = 0.0;
        res.p_raw = res.p_adjusted = 1.0;
        return res;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < ctx.sizes.size(); ++i) {
        acc += ctx.rank_sums[i] * ctx.rank_sums[i] / static_cast<double>(ctx.sizes[i]);
    }
    const double h_raw = 12.0 / (N * (N + 1.0)) * acc - 3.0 * (N + 1.0);
    res.statistic = std::max(0.0, h_raw / correction);
    res.p_raw = res.p_adjusted = chi2_sf(res.statistic, res.df);
    return res;
}

TestResult kruskal_wallis(std::span<const std::vector<double>> groups) {
    return kruskal_wallis(rank_groups(groups));
}

TestResult dunn_pairwise(const RankContext& ctx, std::size_t i, std::size_t j) {
    if (i >= ctx.sizes.size() || j >= ctx.sizes.size() || i == j) {
        throw AnalysisError("dunn_pairwise: bad group index");
    }
    const double N = static_cast<double>(ctx.total);
    const double spread = N * (N + 1.0) / 12.0 - ctx.tie_term / (12.0 * (N - 1.0));
    const double variance =
        spread * (1.0 / static_cast<double>(ctx.sizes[i]) + 1.0 / static_cast<double>(ctx.sizes[j]));
    TestResult res;
    if (!(variance > 0.0)) {
        res.direction = Direction::NotSignificant;
        return res;
    }
    const double diff = ctx.mean_rank(i) - ctx.mean_rank(j);
    res.statistic = diff / std::sqrt(variance);
    res.p_raw = res.p_adjusted = std::min(1.0, 2.0 * normal_sf(std::fabs(res.statistic)));
    res.direction = diff > 0.0 ? Direction::Longer : Direction::Shorter;
    return res;
}

std::vector<double> adjust_bonferroni(std::span<const double> p_values, std::size_t m) {
    if (m < p_values.size()) throw AnalysisError("adjust_bonferroni: m smaller than list");
    std::vector<double> out;
    out.reserve(p_values.size());
    for (double p : p_values) out.push_back(std::min(1.0, static_cast<double>(m) * p));
    return out;
}

double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw AnalysisError("gamma_q: shape must be positive");
    if (x <= 0.0) return 1.0;
    constexpr double eps = 1e-16;
    constexpr int max_iter = 100000;
    const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) {
        // lower series P(a, x)
        double term = 1.0 / a;
        double total = term;
        for (int n = 1; n < max_iter; ++n) {
            term *= x / (a + n);
            total += term;
            if (std::fabs(term) < std::fabs(total) * eps) break;
        }
        return std::clamp(1.0 - total * std::exp(log_prefix), 0.0, 1.0);
    }
    // modified Lentz continued fraction for Q(a, x)
    constexpr double tiny = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_iter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < eps) break;
    }
    return std::clamp(std::exp(log_prefix) * h, 0.0, 1.0);
}

double chi2_sf(double x, int df) {
    if (df < 1) throw AnalysisError("chi2_sf: df must be positive");
    if (!(x > 0.0)) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

TestResult jarque_bera(std::span<const double> samples) {
    if (samples.size() < 4) throw AnalysisError("jarque_bera: needs at least 4 samples");
    if (all_equal(samples)) throw AnalysisError("jarque_bera: degenerate sample");
    const double n = static_cast<double>(samples.size());
    const double mean = mean_of(samples);
    const auto p = kernels::central_power_sums(samples, mean);
    const double m2 = p.s2 / n;
    const double m3 = p.s3 / n;
    const double m4 = p.s4 / n;
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2);
    TestResult res;
    res.statistic = n / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0);
    res.df = 2;
    res.p_raw = res.p_adjusted = chi2_sf(res.statistic, 2);
    res.direction = Direction::NotApplicable;
    return res;
}

}  // namespace exmine::stats
