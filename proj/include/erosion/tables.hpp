#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "erosion/atlas.hpp"
#include "erosion/chunk_detector.hpp"
#include "erosion/mixture_model.hpp"

namespace erosion {

/// Every table starts with this comment line, then a CSV header row.
inline constexpr std::string_view kTableVersionLine = "# erosion-table v1";

/// "%.6g".
[[nodiscard]] std::string format6(double v);

/// Columns family, alpha, metric, q10, q25, q50, q75, q90; rows sorted by
/// (family, metric, alpha). Error(EmptyInput) with no cells, Error(IoFailure)
/// when the file cannot be written.
void emit_atlas_table(std::span<const AtlasCell> cells, const std::filesystem::path& path);

void emit_trend_table(std::span<const TrendRow> rows, const std::filesystem::path& path);

void emit_family_constants(std::span<const FamilyConstant> constants, const std::filesystem::path& path);

struct VerdictRow {
    std::string path;
    std::string family;
    FileVerdict verdict;
    std::optional<int> truth;
};

void emit_verdict_table(std::span<const VerdictRow> rows, const std::filesystem::path& path);

/// Columns family, t_file, metric, degenerate.
void write_thresholds(const FamilyThresholds& thresholds, const std::filesystem::path& path);
/// Error(MalformedLine) on bad rows, Error(SchemaMismatch) on a missing version line.
[[nodiscard]] FamilyThresholds read_thresholds(const std::filesystem::path& path);

}  // namespace erosion
