#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "erosion/byte_stats.hpp"
#include "erosion/corpus_io.hpp"
#include "erosion/crypto_sim.hpp"
#include "erosion/trend.hpp"

namespace erosion {

enum class Metric { Entropy, Variance, Skewness, Euclidean, Kl, TotalVariation };

inline constexpr std::array<Metric, 6> kAllMetrics = {Metric::Entropy,   Metric::Variance, Metric::Skewness,
                                                      Metric::Euclidean, Metric::Kl,       Metric::TotalVariation};

[[nodiscard]] std::string_view to_string(Metric m) noexcept;
[[nodiscard]] double metric_value(const StatVector& s, Metric m) noexcept;

/// The alpha grid lo, lo + step, ..., hi computed as lo + k * step and
/// rounded to 12 decimals so 0.30000000000000004 prints as 0.3.
[[nodiscard]] std::vector<double> alpha_range(double lo, double hi, double step);

struct AtlasOptions {
    std::vector<double> alpha_grid = alpha_range(0.0, 1.0, 0.1);
    EncryptionMode mode{ModeKind::Head, 1.0, kDefaultBlockSize, kDefaultSizeThreshold};  // fraction is overridden
    std::uint64_t seed = 0;
    double kl_smoothing = 1.0;
    unsigned jobs = 1;
};

/// Statistics of one file at every alpha of the grid.
struct AtlasFile {
    std::string family;
    std::string name;
    std::uint64_t size_bytes = 0;
    std::vector<StatVector> stats;  // parallel to the alpha grid
};

struct AtlasCell {
    std::string family;
    double alpha = 0.0;
    Metric metric = Metric::Entropy;
    QuantileBand band;
};

struct AtlasResult {
    std::vector<double> alpha_grid;
    std::vector<AtlasFile> files;  // input order
    std::vector<AtlasCell> cells;  // sorted by (family, metric name, alpha)

    /// Median (or IQR) of one metric across a family's files, along the grid.
    [[nodiscard]] std::vector<double> series(std::string_view family, Metric metric, bool iqr = false) const;
};

/// Encrypts every file at every alpha (one fresh nonce per variant, key from
/// the seed) and measures the result against the file's own plaintext.
/// Error(EmptyCorpus) with no files; Error(EmptyInput) for an empty file.
[[nodiscard]] AtlasResult compute_atlas(std::span<const CorpusItem> corpus, const AtlasOptions& options);

struct TrendRow {
    std::string family;
    Metric metric = Metric::Entropy;
    std::string statistic;  // "median" or "iqr"
    TrendResult mann_kendall;
    SenSlope sen;
};

/// Mann-Kendall and Sen's slope on each family's median and IQR series. The
/// one-sided alternative follows the sign of S.
[[nodiscard]] std::vector<TrendRow> atlas_trends(const AtlasResult& atlas);

}  // namespace erosion
