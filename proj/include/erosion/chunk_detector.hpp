#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "erosion/crypto_sim.hpp"

namespace erosion {

inline constexpr std::size_t kDefaultChunkLen = 10240;
inline constexpr std::size_t kMinChunkLen = 256;
inline constexpr double kDefaultThetaChunk = 0.05;

struct ChunkVerdict {
    std::uint64_t index = 0;
    int label = 0;  // 1 = encrypted
    double score = 0.0;

    bool operator==(const ChunkVerdict&) const = default;
};

/// File-level decision: label == 1 iff encrypted_fraction >= threshold.
struct FileVerdict {
    std::size_t chunk_count = 0;
    double encrypted_fraction = 0.0;
    double threshold = 0.0;
    int label = 0;

    bool operator==(const FileVerdict&) const = default;
};

struct FamilyThresholds {
    std::map<std::string, double> t_file;
    std::string calibration_metric = "balanced_accuracy";
    std::set<std::string> degenerate;  // families whose objective was flat over the grid

    /// Error(UnknownFamily) if absent.
    [[nodiscard]] double at(std::string_view family) const;
};

/// Chunk boundaries for a file of n bytes: ceil(n / chunk_len) pieces, with a
/// tail shorter than 256 bytes folded into the previous chunk.
/// Error(EmptyFile) when n == 0, Error(ChunkLenTooSmall) when chunk_len < 256.
[[nodiscard]] std::vector<ByteRange> chunk_bounds(std::uint64_t n, std::size_t chunk_len = kDefaultChunkLen);

[[nodiscard]] std::vector<std::span<const std::uint8_t>> chunk(std::span<const std::uint8_t> file_bytes,
                                                               std::size_t chunk_len = kDefaultChunkLen);

/// Statistical stand-in for the learned chunk classifier:
/// score = D_KL(chunk || U) in bits, label 1 iff score <= theta.
/// Error(ChunkTooSmall) below 256 bytes.
[[nodiscard]] ChunkVerdict classify_chunk_stat(std::span<const std::uint8_t> chunk_bytes, double theta_chunk,
                                               std::uint64_t index = 0);

/// Chunks a file and classifies every chunk with the stat classifier.
[[nodiscard]] std::vector<ChunkVerdict> classify_chunks_stat(std::span<const std::uint8_t> file_bytes,
                                                             double theta_chunk,
                                                             std::size_t chunk_len = kDefaultChunkLen);

/// Reads a verdict interchange file: one "index<TAB>label<TAB>score" record
/// per line. Returns records sorted by index.
/// Error(MalformedVerdictFile) on bad syntax, labels outside {0, 1} or
/// duplicate indices; Error(IndexGap) unless indices are exactly 0..n-1.
[[nodiscard]] std::vector<ChunkVerdict> read_external_verdicts(const std::filesystem::path& path);
void write_verdicts(const std::filesystem::path& path, std::span<const ChunkVerdict> verdicts);

/// Error(NoVerdicts) on an empty list; Error(InvalidArgument) if t_file is outside [0, 1].
[[nodiscard]] FileVerdict aggregate(std::span<const ChunkVerdict> verdicts, double t_file);

enum class CalibrationObjective { BalancedAccuracy, Accuracy };

[[nodiscard]] std::string_view to_string(CalibrationObjective objective) noexcept;

/// One validation file reduced to its encrypted-chunk fraction p.
struct CalibrationSample {
    std::string family;
    double encrypted_fraction = 0.0;
    int truth = 0;
};

/// Grid points k * grid_step over [0, 1] (1 is always included).
[[nodiscard]] std::vector<double> threshold_grid(double grid_step);

/// Per family, the grid threshold maximizing the objective for the rule
/// "encrypted iff p >= t"; ties go to the smallest threshold.
/// Error(EmptyFamily) on an empty validation set.
[[nodiscard]] FamilyThresholds calibrate_thresholds(std::span<const CalibrationSample> validation,
                                                   double grid_step = 0.01,
                                                   CalibrationObjective objective = CalibrationObjective::BalancedAccuracy);

struct StatChunkClassifier {
    double theta = kDefaultThetaChunk;
};

/// Per-chunk verdicts produced elsewhere, e.g. by the learned classifier.
struct ExternalChunkVerdicts {
    std::vector<ChunkVerdict> verdicts;
};

using ChunkClassifier = std::variant<StatChunkClassifier, ExternalChunkVerdicts>;

/// chunk -> classify -> aggregate against t_file(family).
/// External verdicts must cover exactly the file's chunks (Error(MalformedVerdictFile) otherwise).
[[nodiscard]] FileVerdict scan_file(std::span<const std::uint8_t> file_bytes, std::string_view family,
                                    const FamilyThresholds& thresholds, const ChunkClassifier& classifier,
                                    std::size_t chunk_len = kDefaultChunkLen);

/// Evaluation convention: a chunk is truly encrypted iff at least half of its
/// bytes lie inside the plan's ranges.
[[nodiscard]] std::vector<int> chunk_truth(const EncryptionPlan& plan, std::size_t chunk_len = kDefaultChunkLen);

}  // namespace erosion
