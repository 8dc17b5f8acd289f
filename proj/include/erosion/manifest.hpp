#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "erosion/corpus_io.hpp"
#include "erosion/crypto_sim.hpp"

namespace erosion {

inline constexpr int kManifestSchemaVersion = 1;

struct ManifestRecord {
    FileRecord source;
    EncryptionPlan plan;
    std::string key_id;
    GcmNonce nonce{};
    std::filesystem::path output_path;

    bool operator==(const ManifestRecord&) const = default;
};

/// Ground truth of one encryption run.
struct ExperimentManifest {
    std::vector<ManifestRecord> records;
    std::uint64_t seed = 0;
    EncryptionMode mode;
    std::vector<double> alpha_grid;

    bool operator==(const ExperimentManifest&) const = default;
};

/// Error(ManifestInvalid) when two records share a nonce or an output path.
void validate(const ExperimentManifest& manifest);

/// JSON lines: a header object, then one object per record. Every line
/// carries "schema_version". Validates before writing anything.
void write_manifest(const ExperimentManifest& manifest, const std::filesystem::path& path);

/// Error(SchemaMismatch) when a line lacks the version or has another one,
/// Error(MalformedLine) on unparsable lines or a missing header,
/// Error(ManifestInvalid) when the uniqueness invariants do not hold.
[[nodiscard]] ExperimentManifest read_manifest(const std::filesystem::path& path);

}  // namespace erosion
