#include "erosion/trend.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "erosion/error.hpp"

namespace erosion {

namespace {

int sign(double v) noexcept { return (v > 0.0) - (v < 0.0); }

double normal_cdf(double z) {
    static const boost::math::normal standard;
    return boost::math::cdf(standard, z);
}

double normal_upper(double z) {
    static const boost::math::normal standard;
    return boost::math::cdf(boost::math::complement(standard, z));
}

double normal_quantile(double p) {
    static const boost::math::normal standard;
    return boost::math::quantile(standard, p);
}

std::int64_t round_half_up(double v) { return static_cast<std::int64_t>(std::floor(v + 0.5)); }

}  // namespace

std::string_view to_string(TrendDirection d) noexcept {
    return d == TrendDirection::Increasing ? "increasing" : "decreasing";
}

double mann_kendall_variance(std::span<const double> series) {
    const double n = static_cast<double>(series.size());
    std::vector<double> sorted(series.begin(), series.end());
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        tie_term += t * (t - 1.0) * (2.0 * t + 5.0);
        i = j;
    }
    return (n * (n - 1.0) * (2.0 * n + 5.0) - tie_term) / 18.0;
}

TrendResult mann_kendall(std::span<const double> series, TrendDirection alternative) {
    if (series.size() < 3) {
        throw Error(ErrorCode::SeriesTooShort,
                    "Mann-Kendall needs >= 3 points, got " + std::to_string(series.size()));
    }
    TrendResult r;
    r.alternative = alternative;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        for (std::size_t j = i + 1; j < series.size(); ++j) {
            r.s_statistic += sign(series[j] - series[i]);
        }
    }
    r.variance_s = mann_kendall_variance(series);
    if (r.s_statistic != 0 && r.variance_s > 0.0) {
        const double s = static_cast<double>(r.s_statistic);
        r.z_score = (s - static_cast<double>(sign(s))) / std::sqrt(r.variance_s);
    }
    r.p_value = alternative == TrendDirection::Increasing ? normal_upper(r.z_score)
                                                          : normal_cdf(r.z_score);
    r.p_value = std::clamp(r.p_value, 0.0, 1.0);
    return r;
}

SenSlope sen_slope(std::span<const double> series, double confidence) {
    if (series.size() < 2) {
        throw Error(ErrorCode::SeriesTooShort,
                    "Sen's slope needs >= 2 points, got " + std::to_string(series.size()));
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "confidence must lie in (0, 1)");
    }
    std::vector<double> slopes;
    slopes.reserve(series.size() * (series.size() - 1) / 2);
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        for (std::size_t j = i + 1; j < series.size(); ++j) {
            slopes.push_back((series[j] - series[i]) / static_cast<double>(j - i));
        }
    }
    std::sort(slopes.begin(), slopes.end());
    const std::size_t m = slopes.size();

    SenSlope out;
    out.confidence = confidence;
    out.slope = (m % 2 == 1) ? slopes[m / 2] : 0.5 * (slopes[m / 2 - 1] + slopes[m / 2]);

    // Ranks are 1-based into the sorted slopes.
    const double c = normal_quantile(1.0 - (1.0 - confidence) / 2.0) *
                     std::sqrt(mann_kendall_variance(series));
    const auto md = static_cast<double>(m);
    const auto clamp_rank = [m](std::int64_t r) {
        return static_cast<std::size_t>(std::clamp<std::int64_t>(r, 1, static_cast<std::int64_t>(m)));
    };
    const std::size_t lo = clamp_rank(round_half_up((md - c) / 2.0));
    const std::size_t hi = clamp_rank(round_half_up((md + c) / 2.0 + 1.0));
    out.ci_low = slopes[lo - 1];
    out.ci_high = slopes[hi - 1];
    return out;
}

}  // namespace erosion
