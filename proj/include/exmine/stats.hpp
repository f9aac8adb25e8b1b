#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace exmine::stats {

enum class Direction { Longer, Shorter, NotSignificant, NotApplicable };

const char* to_string(Direction d);

struct GroupStats {
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;                 // sample standard deviation, n - 1 denominator
    std::optional<double> skewness;   // bias corrected; needs std > 0 and n >= 3
    std::optional<double> kurtosis;   // bias-corrected excess; needs std > 0 and n >= 4
};

struct TestResult {
    double statistic = 0.0;
    int df = 1;
    double p_raw = 1.0;
    double p_adjusted = 1.0;
    Direction direction = Direction::NotSignificant;
};

GroupStats descriptive_stats(std::span<const double> samples);

/// Mid-ranks (1-based); tied values share the average of the positions they occupy.
std::vector<double> rank_with_ties(std::span<const double> pooled);

/// Pooled ranking of k groups, shared by the omnibus test and the pairwise post-hoc.
struct RankContext {
    std::size_t total = 0;              // N
    std::vector<std::size_t> sizes;     // n_i
    std::vector<double> rank_sums;      // R_i
    double tie_term = 0.0;              // sum over tie blocks of t^3 - t

    [[nodiscard]] double mean_rank(std::size_t group) const {
        return rank_sums[group] / static_cast<double>(sizes[group]);
    }
};

RankContext rank_groups(std::span<const std::vector<double>> groups);

/// Tie-corrected Kruskal-Wallis H with chi-square(k - 1) p-value.
TestResult kruskal_wallis(std::span<const std::vector<double>> groups);
TestResult kruskal_wallis(const RankContext& ctx);

/// Dunn's z for groups i and j using pooled ranks. Direction is Longer when group
/// i has the larger mean rank; significance is left to the caller.
TestResult dunn_pairwise(const RankContext& ctx, std::size_t i, std::size_t j);

/// min(1, m * p) per entry. Requires m >= p.size().
std::vector<double> adjust_bonferroni(std::span<const double> p_values, std::size_t m);

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// Upper tail of the chi-square distribution.
double chi2_sf(double x, int df);

/// Upper tail of the standard normal distribution.
double normal_sf(double z);

/// Jarque-Bera normality statistic on population moments, chi-square(2) p-value.
/// Throws AnalysisError for n < 4 or a constant sample.
TestResult jarque_bera(std::span<const double> samples);

}  // namespace exmine::stats
