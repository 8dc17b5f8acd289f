#include "erosion/byte_stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "erosion/error.hpp"

namespace erosion {

namespace {

// Below this second moment the bins are equal up to rounding noise.
constexpr double kDegenerateMoment = 1e-30;

double checked_smoothing(double smoothing) {
    if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) {
        throw Error(ErrorCode::InvalidArgument, "smoothing must be finite and >= 0");
    }
    return smoothing;
}

double kl_against(const ByteDistribution& p, const std::array<double, kByteValues>& q) {
    double sum = 0.0;
    for (std::size_t b = 0; b < kByteValues; ++b) {
        const double pb = p[b];
        if (pb <= 0.0) {
            continue;
        }
        if (q[b] <= 0.0) {
            throw Error(ErrorCode::SupportMismatch,
                        "p has mass on byte " + std::to_string(b) + " where q has none");
        }
        sum += pb * std::log2(pb / q[b]);
    }
    return std::max(0.0, sum);
}

}  // namespace

void ByteHistogram::add(std::span<const std::uint8_t> bytes) noexcept {
    for (std::uint8_t v : bytes) {
        ++counts[v];
    }
    total += bytes.size();
}

ByteHistogram& ByteHistogram::operator+=(const ByteHistogram& other) noexcept {
    for (std::size_t b = 0; b < kByteValues; ++b) {
        counts[b] += other.counts[b];
    }
    total += other.total;
    return *this;
}

std::uint64_t ByteHistogram::max_count() const noexcept {
    return *std::max_element(counts.begin(), counts.end());
}

ByteDistribution::ByteDistribution() { probs_.fill(kUniformProb); }

ByteDistribution::ByteDistribution(const Probs& probs) : probs_(probs) {
    double sum = 0.0;
    for (double v : probs_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, "probabilities must be finite and non-negative");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw Error(ErrorCode::InvalidArgument,
                    "probabilities sum to " + std::to_string(sum) + ", expected 1");
    }
}

ByteDistribution ByteDistribution::uniform() { return ByteDistribution(); }

ByteDistribution ByteDistribution::one_hot(std::uint8_t value) {
    Probs p{};
    p[value] = 1.0;
    return ByteDistribution(p);
}

ByteHistogram histogram(std::span<const std::uint8_t> bytes) noexcept {
    ByteHistogram h;
    h.add(bytes);
    return h;
}

ByteDistribution normalize(const ByteHistogram& hist) {
    if (hist.total == 0) {
        throw Error(ErrorCode::EmptyInput, "cannot normalize an empty histogram");
    }
    ByteDistribution::Probs p{};
    const double total = static_cast<double>(hist.total);
    for (std::size_t b = 0; b < kByteValues; ++b) {
        p[b] = static_cast<double>(hist.counts[b]) / total;
    }
    return ByteDistribution(p);
}

double entropy_bits(const ByteDistribution& dist) noexcept {
    double h = 0.0;
    for (double p : dist.probs()) {
        if (p > 0.0) {
            h -= p * std::log2(p);
        }
    }
    return std::clamp(h, 0.0, 8.0);
}

double variance(const ByteDistribution& dist) noexcept {
    const auto& p = dist.probs();
    double mean = 0.0;
    for (double v : p) mean += v;
    mean /= static_cast<double>(kByteValues);
    double m2 = 0.0;
    for (double v : p) {
        const double d = v - mean;
        m2 += d * d;
    }
    return m2 / static_cast<double>(kByteValues);
}

double skewness(const ByteDistribution& dist) noexcept {
    const auto& p = dist.probs();
    const double n = static_cast<double>(kByteValues);
    double mean = 0.0;
    for (double v : p) mean += v;
    mean /= n;
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : p) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 <= kDegenerateMoment) {
        return 0.0;
    }
    return m3 / std::pow(m2, 1.5);
}

double kl_divergence_bits(const ByteDistribution& p, const ByteDistribution& q, double smoothing) {
    const double s = checked_smoothing(smoothing);
    std::array<double, kByteValues> qs{};
    const double norm = 1.0 + static_cast<double>(kByteValues) * s;
    for (std::size_t b = 0; b < kByteValues; ++b) {
        qs[b] = (q[b] + s) / norm;
    }
    return kl_against(p, qs);
}

double kl_divergence_bits(const ByteDistribution& p, const ByteHistogram& q, double smoothing) {
    const double s = checked_smoothing(smoothing);
    const double norm = static_cast<double>(q.total) + static_cast<double>(kByteValues) * s;
    if (norm <= 0.0) {
        throw Error(ErrorCode::EmptyInput, "reference histogram is empty and unsmoothed");
    }
    std::array<double, kByteValues> qs{};
    for (std::size_t b = 0; b < kByteValues; ++b) {
        qs[b] = (static_cast<double>(q.counts[b]) + s) / norm;
    }
    return kl_against(p, qs);
}

double l2_distance(const ByteDistribution& p, const ByteDistribution& q) noexcept {
    double sum = 0.0;
    for (std::size_t b = 0; b < kByteValues; ++b) {
        const double d = p[b] - q[b];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double total_variation(const ByteDistribution& p, const ByteDistribution& q) noexcept {
    double sum = 0.0;
    for (std::size_t b = 0; b < kByteValues; ++b) {
        sum += std::abs(p[b] - q[b]);
    }
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

StatVector stat_vector(const ByteDistribution& observed, const ByteHistogram& reference,
                       double kl_smoothing) {
    const ByteDistribution ref = normalize(reference);
    StatVector v;
    v.entropy_bits = entropy_bits(observed);
    v.variance = variance(observed);
    v.skewness = skewness(observed);
    v.l2_to_ref = l2_distance(observed, ref);
    v.kl_to_ref_bits = kl_divergence_bits(observed, reference, kl_smoothing);
    v.tv_to_ref = total_variation(observed, ref);
    return v;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw Error(ErrorCode::EmptyInput, "quantile of an empty list");
    }
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

QuantileBand quantile_band(std::span<const double> values) {
    if (values.empty()) {
        throw Error(ErrorCode::EmptyInput, "quantile band of an empty list");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    QuantileBand band;
    band.q10 = quantile_sorted(sorted, 0.10);
    band.q25 = quantile_sorted(sorted, 0.25);
    band.q50 = quantile_sorted(sorted, 0.50);
    band.q75 = quantile_sorted(sorted, 0.75);
    band.q90 = quantile_sorted(sorted, 0.90);
    return band;
}

}  // namespace erosion
