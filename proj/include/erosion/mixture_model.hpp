#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "erosion/byte_stats.hpp"

namespace erosion {

/// 256 / ln 2: the KL ceiling's scale factor.
inline constexpr double kCeilingScale = 256.0 / 0.693147180559945309417232121458176568;

/// Family constant c_F^2 with its bootstrap interval.
struct FamilyConstant {
    std::string family;
    double c_squared_median = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t replicates = 0;
    std::size_t subset_size = 0;
};

/// Per-byte deviation of a plaintext distribution from uniform, evaluated at
/// one coverage.
struct LeakProfile {
    std::array<double, kByteValues> delta{};  // P_orig(b) - 1/256
    double epsilon_max = 0.0;                 // 256 (1 - alpha) max_b |delta(b)|
    bool small_leak_ok = true;                // epsilon_max < 1
};

/// How one bootstrap replicate turns its sampled files into a single c^2.
enum class ReplicateAggregation {
    PooledBytes,  // sum the sampled histograms, then c^2 of the pooled distribution
    MeanOfFiles,  // average of per-file c^2
};

struct BootstrapOptions {
    std::size_t subset_size = 200;
    std::size_t replicates = 100;
    std::uint64_t seed = 0;
    ReplicateAggregation aggregation = ReplicateAggregation::PooledBytes;
    unsigned jobs = 1;
};

/// alpha/256 + (1 - alpha) p_orig. Error(AlphaOutOfRange) outside [0, 1].
[[nodiscard]] ByteDistribution mixture(const ByteDistribution& p_orig, double alpha);

/// ||p_orig - U||_2^2.
[[nodiscard]] double c_squared(const ByteDistribution& p_orig) noexcept;

/// Bootstrap estimate of c_F^2 over a family's cleartext corpus.
///
/// Each replicate draws `subset_size` files with replacement. Replicate r is
/// seeded from (seed, r) alone, so the result does not depend on `jobs`.
/// The interval is the 2.5 / 97.5 percentile of the replicate values.
[[nodiscard]] FamilyConstant estimate_family_constant(std::span<const ByteHistogram> corpus,
                                                      const std::string& family,
                                                      const BootstrapOptions& options);

/// Exact D_KL(P_mix(alpha) || U) in bits.
[[nodiscard]] double escape_trajectory(const ByteDistribution& p_orig, double alpha);

/// (256 / ln 2) c^2 (1 - alpha)^2, the largest KL any mixture at this
/// coverage can reach.
[[nodiscard]] double ceiling(double c_squared, double alpha);

/// Coverage above which a KL threshold tau can no longer fire, clamped to [0, 1].
/// Error(DegenerateFamily) when c_squared == 0.
[[nodiscard]] double alpha_star(double c_squared, double tau);

/// raw_kl / ((256 / ln 2) c^2). Error(DegenerateFamily) when c_squared == 0.
[[nodiscard]] double normalize_kl(double raw_kl, double c_squared);

[[nodiscard]] LeakProfile leak_profile(const ByteDistribution& p_orig, double alpha);

}  // namespace erosion
