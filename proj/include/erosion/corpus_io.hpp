#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "erosion/hex.hpp"

namespace erosion {

inline constexpr std::string_view kUnknownFamily = "unknown";

struct FileRecord {
    std::filesystem::path path;
    std::string family;
    std::uint64_t size_bytes = 0;
    Sha256Digest content_digest{};

    bool operator==(const FileRecord&) const = default;
};

/// Extension table (lowercase, without the dot) plus magic-byte fallbacks.
struct FamilyRules {
    std::map<std::string, std::string> by_extension;

    /// The eleven document, image and media families, with common aliases
    /// (jpeg -> jpg, txt/csv/log -> txt, ...).
    static FamilyRules defaults();
};

/// Family from the extension first; otherwise from the leading bytes
/// (PNG, JPEG, PDF and ZIP-container signatures); otherwise "unknown".
[[nodiscard]] std::string label_family(const std::filesystem::path& path, std::span<const std::uint8_t> head,
                                       const FamilyRules& rules);

struct ScanError {
    std::filesystem::path path;
    std::string message;
};

struct CorpusScan {
    std::vector<FileRecord> records;  // sorted by path
    std::vector<ScanError> errors;    // files that could not be read
};

/// One record per regular file below `root`, recursively, ordered by path.
/// Error(UnreadableRoot) when root is missing or not a directory.
[[nodiscard]] CorpusScan scan_corpus(const std::filesystem::path& root, const FamilyRules& rules = FamilyRules::defaults(),
                                     unsigned jobs = 1);

/// A file to analyse, loaded on demand so corpora need not fit in memory.
struct CorpusItem {
    std::string family;
    std::string name;
    std::function<std::vector<std::uint8_t>()> load;
};

[[nodiscard]] std::vector<CorpusItem> items_from_records(std::span<const FileRecord> records);

/// Whole file as bytes. Error(IoFailure) on failure.
[[nodiscard]] std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Flat identifier for a file below `root`: its relative path with
/// separators replaced by "__", e.g. "xls/a.xls" -> "xls__a.xls".
[[nodiscard]] std::string file_id(const std::filesystem::path& root, const std::filesystem::path& file);

}  // namespace erosion
