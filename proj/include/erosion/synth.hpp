#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "erosion/corpus_io.hpp"

namespace erosion {

enum class Archetype {
    TextLike,          // i.i.d. draws from an English-like unigram table
    StructuredBinary,  // spreadsheet-style records: fixed headers, small ints, short strings, zero slack
    Precompressed,     // container boxes around keystream payloads with a little zero stuffing
};

[[nodiscard]] std::string_view to_string(Archetype a) noexcept;
/// "text", "structured", "precompressed". Error(InvalidArgument) otherwise.
[[nodiscard]] Archetype parse_archetype(std::string_view name);

/// Integer weights of the text generator's unigram table, indexed by byte value.
[[nodiscard]] const std::array<std::uint32_t, 256>& text_unigram_weights() noexcept;

/// Deterministic file body of exactly `size` bytes.
[[nodiscard]] std::vector<std::uint8_t> generate_archetype(Archetype archetype, std::uint64_t size,
                                                           std::uint64_t seed);

struct FamilySpec {
    std::string family;
    Archetype archetype = Archetype::TextLike;
    std::size_t count = 0;
    std::uint64_t min_size = 0;
    std::uint64_t max_size = 0;
    std::string extension;  // defaults to the family name when empty
};

struct SynthSpec {
    std::vector<FamilySpec> families;
};

/// One file the generator will produce.
struct SynthItem {
    std::string family;
    Archetype archetype = Archetype::TextLike;
    std::size_t index = 0;
    std::uint64_t size = 0;
    std::uint64_t seed = 0;
    std::filesystem::path relative_path;  // <family>/<family>_NNNN.<ext>
};

/// Error(SpecInvalid) on an empty spec, zero counts, bad size ranges,
/// duplicate or unsafe family names.
void validate(const SynthSpec& spec);

/// Sizes and seeds of every file, without generating bytes. Each file's seed
/// depends only on (seed, family name, index).
[[nodiscard]] std::vector<SynthItem> plan_synth(const SynthSpec& spec, std::uint64_t seed);

[[nodiscard]] inline std::vector<std::uint8_t> generate(const SynthItem& item) {
    return generate_archetype(item.archetype, item.size, item.seed);
}

[[nodiscard]] std::vector<CorpusItem> items_from_synth(std::span<const SynthItem> plan);

/// Writes every planned file below out_dir and returns their records, sorted by path.
[[nodiscard]] std::vector<FileRecord> synth_corpus(const SynthSpec& spec, std::uint64_t seed,
                                                   const std::filesystem::path& out_dir, unsigned jobs = 1);

}  // namespace erosion
