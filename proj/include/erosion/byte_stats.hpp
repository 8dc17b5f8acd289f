#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace erosion {

inline constexpr std::size_t kByteValues = 256;
inline constexpr double kUniformProb = 1.0 / 256.0;

/// Occurrence count per byte value. `total` always equals the sum of `counts`.
struct ByteHistogram {
    std::array<std::uint64_t, kByteValues> counts{};
    std::uint64_t total = 0;

    void add(std::span<const std::uint8_t> bytes) noexcept;
    ByteHistogram& operator+=(const ByteHistogram& other) noexcept;
    [[nodiscard]] std::uint64_t max_count() const noexcept;

    bool operator==(const ByteHistogram&) const = default;
};

/// Probability mass over the 256 byte values.
///
/// Construction validates that every entry is non-negative and finite and
/// that the mass sums to one within 1e-9.
class ByteDistribution {
public:
    using Probs = std::array<double, kByteValues>;

    ByteDistribution();  // uniform
    explicit ByteDistribution(const Probs& probs);

    static ByteDistribution uniform();
    static ByteDistribution one_hot(std::uint8_t value);

    [[nodiscard]] double operator[](std::size_t b) const { return probs_[b]; }
    [[nodiscard]] const Probs& probs() const noexcept { return probs_; }

    bool operator==(const ByteDistribution&) const = default;

private:
    Probs probs_;
};

/// Scalar statistics of one observed distribution, plus its distances to a
/// reference (the file's own plaintext in the atlas).
struct StatVector {
    double entropy_bits = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double l2_to_ref = 0.0;
    double kl_to_ref_bits = 0.0;
    double tv_to_ref = 0.0;
};

struct QuantileBand {
    double q10 = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    double q90 = 0.0;

    [[nodiscard]] double iqr() const noexcept { return q75 - q25; }
};

[[nodiscard]] ByteHistogram histogram(std::span<const std::uint8_t> bytes) noexcept;

/// Throws Error(EmptyInput) when the histogram is empty.
[[nodiscard]] ByteDistribution normalize(const ByteHistogram& hist);

/// Shannon entropy in bits with 0*log(0) = 0. Always in [0, 8].
[[nodiscard]] double entropy_bits(const ByteDistribution& dist) noexcept;

/// Population variance of the 256 bin probabilities.
[[nodiscard]] double variance(const ByteDistribution& dist) noexcept;

/// Population skewness m3 / m2^1.5 of the 256 bin probabilities; 0 when the
/// bins are (numerically) all equal.
[[nodiscard]] double skewness(const ByteDistribution& dist) noexcept;

/// D_KL(p || q') in bits where q' = (q + s) / (1 + 256 s): `smoothing`
/// pseudo-mass per bin on a unit-mass scale, then renormalized.
/// With smoothing == 0 the support of p must lie inside the support of q,
/// otherwise Error(SupportMismatch).
[[nodiscard]] double kl_divergence_bits(const ByteDistribution& p, const ByteDistribution& q,
                                        double smoothing);

/// D_KL(p || q') in bits where q' is the Laplace-smoothed reference histogram
/// q'[b] = (n[b] + s) / (N + 256 s). This is the distance-to-plaintext form.
[[nodiscard]] double kl_divergence_bits(const ByteDistribution& p, const ByteHistogram& q,
                                        double smoothing = 1.0);

[[nodiscard]] double l2_distance(const ByteDistribution& p, const ByteDistribution& q) noexcept;
[[nodiscard]] double total_variation(const ByteDistribution& p, const ByteDistribution& q) noexcept;

/// All six atlas statistics of `observed` against the reference histogram.
/// The reference must be non-empty.
[[nodiscard]] StatVector stat_vector(const ByteDistribution& observed, const ByteHistogram& reference,
                                     double kl_smoothing = 1.0);

/// Linear interpolation between order statistics (h = (n-1) q). `sorted`
/// must be non-empty and ascending.
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double q);

/// Throws Error(EmptyInput) on an empty list.
[[nodiscard]] QuantileBand quantile_band(std::span<const double> values);

}  // namespace erosion
