#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace erosion {

enum class TrendDirection { Increasing, Decreasing };

[[nodiscard]] std::string_view to_string(TrendDirection d) noexcept;

struct TrendResult {
    std::int64_t s_statistic = 0;
    double variance_s = 0.0;  // tie-corrected
    double z_score = 0.0;     // continuity-corrected
    double p_value = 0.5;     // one-sided, for `alternative`
    TrendDirection alternative = TrendDirection::Increasing;
};

struct SenSlope {
    double slope = 0.0;  // metric units per series step
    double ci_low = 0.0;
    double ci_high = 0.0;
    double confidence = 0.95;
};

/// One-sided Mann-Kendall test. Requires at least 3 points
/// (Error(SeriesTooShort) otherwise).
///
/// S = sum_{i<j} sign(y_j - y_i), Var(S) = [n(n-1)(2n+5) - sum_t t(t-1)(2t+5)] / 18
/// over tie groups t, z = (S - sign(S)) / sqrt(Var(S)) and z = 0 when S or
/// Var(S) is zero.
[[nodiscard]] TrendResult mann_kendall(std::span<const double> series, TrendDirection alternative);

/// Median of all pairwise slopes (y_j - y_i) / (j - i) with a rank-based
/// normal-approximation confidence interval. Requires at least 2 points and
/// 0 < confidence < 1.
[[nodiscard]] SenSlope sen_slope(std::span<const double> series, double confidence = 0.95);

/// Tie-corrected variance of the Mann-Kendall S statistic.
[[nodiscard]] double mann_kendall_variance(std::span<const double> series);

}  // namespace erosion
