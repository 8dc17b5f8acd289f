#include "erosion/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <optional>
#include <set>

#include "erosion/error.hpp"
#include "erosion/parallel.hpp"
#include "erosion/rng.hpp"

namespace fs = std::filesystem;

namespace erosion {

std::string_view to_string(Archetype a) noexcept {
    switch (a) {
        case Archetype::TextLike: return "text";
        case Archetype::StructuredBinary: return "structured";
        case Archetype::Precompressed: return "precompressed";
    }
    return "?";
}

Archetype parse_archetype(std::string_view name) {
    if (name == "text") return Archetype::TextLike;
    if (name == "structured") return Archetype::StructuredBinary;
    if (name == "precompressed") return Archetype::Precompressed;
    throw Error(ErrorCode::InvalidArgument, "unknown archetype '" + std::string(name) + "'");
}

const std::array<std::uint32_t, 256>& text_unigram_weights() noexcept {
    static const std::array<std::uint32_t, 256> table = [] {
        std::array<std::uint32_t, 256> w{};
        // Roughly English prose per 10k characters.
        const std::pair<char, std::uint32_t> letters[] = {
            {'e', 1000}, {'t', 720}, {'a', 650}, {'o', 610}, {'i', 560}, {'n', 560}, {'s', 510}, {'h', 490},
            {'r', 480},  {'d', 340}, {'l', 320}, {'c', 220}, {'u', 220}, {'m', 200}, {'w', 190}, {'f', 180},
            {'g', 160},  {'y', 160}, {'p', 150}, {'b', 120}, {'v', 80},  {'k', 60},  {'j', 10},  {'x', 12},
            {'q', 8},    {'z', 6},
        };
        for (auto [c, n] : letters) w[static_cast<unsigned char>(c)] = n;
        w[' '] = 1750;
        w['\n'] = 140;
        w[','] = 110;
        w['.'] = 100;
        w['\''] = 20;
        w['-'] = 15;
        w['"'] = 12;
        w[';'] = 4;
        w[':'] = 4;
        w['?'] = 5;
        w['('] = 3;
        w[')'] = 3;
        for (char c = '0'; c <= '9'; ++c) w[static_cast<unsigned char>(c)] = 8;
        for (char c : std::string_view("TAISHWMBCOPNDREFGLY")) w[static_cast<unsigned char>(c)] = 18;
        for (char c : std::string_view("JKQUVXZ")) w[static_cast<unsigned char>(c)] = 3;
        return w;
    }();
    return table;
}

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

std::vector<std::uint8_t> generate_text(std::uint64_t size, Rng& rng) {
    const auto& w = text_unigram_weights();
    std::vector<std::uint8_t> lookup;
    for (std::size_t b = 0; b < 256; ++b) lookup.insert(lookup.end(), w[b], static_cast<std::uint8_t>(b));
    std::vector<std::uint8_t> out(size);
    for (auto& byte : out) byte = lookup[rng.below(lookup.size())];
    return out;
}

// BIFF-like worksheet stream. Per-file vocabularies keep files distinct
// while every record type stays low-entropy.
std::vector<std::uint8_t> generate_structured(std::uint64_t size, Rng& rng) {
    static const char* const kWords[] = {"Total", "Q1", "Q2", "Q3", "Q4", "Revenue", "Cost", "Region", "North",
                                         "South", "East", "West", "Units", "Price", "Date", "Name", "ID",
                                         "Margin", "Budget", "Actual", "Forecast", "Sheet1", "Notes", "Sum"};
    constexpr std::size_t kWordCount = std::size(kWords);
    std::vector<std::size_t> vocab(6 + rng.below(10));
    for (auto& v : vocab) v = rng.below(kWordCount);
    const std::uint16_t columns = static_cast<std::uint16_t>(4 + rng.below(12));
    const std::uint64_t value_range = 50 + rng.below(400);
    const std::uint64_t slack_every = 8 + rng.below(24);

    std::vector<std::uint8_t> out;
    out.reserve(size + 1024);
    // BOF record
    put_u16(out, 0x0809);
    put_u16(out, 16);
    put_u16(out, 0x0600);
    put_u16(out, 0x0010);
    for (int i = 0; i < 12; ++i) out.push_back(0);

    std::uint16_t row = 0;
    std::uint64_t rows_since_slack = 0;
    while (out.size() < size) {
        // ROW record
        put_u16(out, 0x0208);
        put_u16(out, 16);
        put_u16(out, row);
        put_u16(out, 0);
        put_u16(out, columns);
        put_u16(out, 0x00FF);
        for (int i = 0; i < 8; ++i) out.push_back(0);
        for (std::uint16_t col = 0; col < columns; ++col) {
            const auto kind = rng.below(10);
            if (kind < 4) {
                // RK: small integer
                put_u16(out, 0x027E);
                put_u16(out, 10);
                put_u16(out, row);
                put_u16(out, col);
                put_u16(out, 0x000F);
                const auto v = static_cast<std::uint32_t>(rng.below(value_range));
                put_u16(out, static_cast<std::uint16_t>(((v << 2) | 2) & 0xFFFF));
                put_u16(out, static_cast<std::uint16_t>((v << 2) >> 16));
            } else if (kind < 7) {
                // NUMBER: a half-integer double, so most mantissa bytes are zero
                put_u16(out, 0x0203);
                put_u16(out, 14);
                put_u16(out, row);
                put_u16(out, col);
                put_u16(out, 0x000F);
                const double v = 0.5 * static_cast<double>(rng.below(value_range * 2));
                std::uint8_t raw[8];
                std::memcpy(raw, &v, 8);
                out.insert(out.end(), raw, raw + 8);
            } else {
                // LABEL
                const std::string_view word = kWords[vocab[rng.below(vocab.size())]];
                put_u16(out, 0x0204);
                put_u16(out, static_cast<std::uint16_t>(9 + word.size()));
                put_u16(out, row);
                put_u16(out, col);
                put_u16(out, 0x000F);
                put_u16(out, static_cast<std::uint16_t>(word.size()));
                out.push_back(0);
                out.insert(out.end(), word.begin(), word.end());
            }
        }
        ++row;
        if (++rows_since_slack >= slack_every) {
            // Unused sector space is zero-filled in compound documents.
            out.insert(out.end(), 64 + rng.below(448), 0);
            rows_since_slack = 0;
        }
    }
    out.resize(size);
    return out;
}

// ISO-BMFF-like: ftyp, then mdat boxes whose payload is keystream with a
// short zero run (stuffing) per box.
std::vector<std::uint8_t> generate_precompressed(std::uint64_t size, Rng& rng) {
    const double stuffing = 0.002 + 0.004 * rng.unit();
    std::vector<std::uint8_t> out;
    out.reserve(size + 64 * 1024);
    put_u32_be(out, 24);
    for (char c : std::string_view("ftypisom")) out.push_back(static_cast<std::uint8_t>(c));
    put_u32_be(out, 0x200);
    for (char c : std::string_view("isomavc1")) out.push_back(static_cast<std::uint8_t>(c));
    while (out.size() < size) {
        const std::uint64_t payload = 16 * 1024 + rng.below(48 * 1024);
        put_u32_be(out, static_cast<std::uint32_t>(payload + 8));
        for (char c : std::string_view("mdat")) out.push_back(static_cast<std::uint8_t>(c));
        const std::size_t start = out.size();
        out.resize(start + payload);
        for (std::size_t i = start; i < out.size(); i += 8) {
            const std::uint64_t word = rng.next();
            for (std::size_t k = 0; k < 8 && i + k < out.size(); ++k) {
                out[i + k] = static_cast<std::uint8_t>(word >> (8 * k));
            }
        }
        const auto run = static_cast<std::uint64_t>(stuffing * static_cast<double>(payload));
        const std::uint64_t at = start + rng.below(payload - run + 1);
        std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(at), run, std::uint8_t{0});
    }
    out.resize(size);
    return out;
}

std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

bool safe_name(std::string_view s) {
    if (s.empty() || s == "." || s == "..") return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

}  // namespace

std::vector<std::uint8_t> generate_archetype(Archetype archetype, std::uint64_t size, std::uint64_t seed) {
    Rng rng(seed);
    switch (archetype) {
        case Archetype::TextLike: return generate_text(size, rng);
        case Archetype::StructuredBinary: return generate_structured(size, rng);
        case Archetype::Precompressed: return generate_precompressed(size, rng);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown archetype");
}

void validate(const SynthSpec& spec) {
    if (spec.families.empty()) {
        throw Error(ErrorCode::SpecInvalid, "no families requested");
    }
    std::set<std::string> names;
    for (const auto& f : spec.families) {
        if (!safe_name(f.family)) {
            throw Error(ErrorCode::SpecInvalid, "bad family name '" + f.family + "'");
        }
        if (!f.extension.empty() && !safe_name(f.extension)) {
            throw Error(ErrorCode::SpecInvalid, "bad extension '" + f.extension + "'");
        }
        if (!names.insert(f.family).second) {
            throw Error(ErrorCode::SpecInvalid, "family '" + f.family + "' listed twice");
        }
        if (f.count == 0) {
            throw Error(ErrorCode::SpecInvalid, "family '" + f.family + "' has a zero count");
        }
        if (f.min_size == 0 || f.min_size > f.max_size) {
            throw Error(ErrorCode::SpecInvalid, "family '" + f.family + "' needs 1 <= min_size <= max_size");
        }
    }
}

std::vector<SynthItem> plan_synth(const SynthSpec& spec, std::uint64_t seed) {
    validate(spec);
    std::vector<SynthItem> items;
    for (const auto& f : spec.families) {
        const std::uint64_t family_seed = derive_seed(seed, fnv1a(f.family));
        const std::string ext = f.extension.empty() ? f.family : f.extension;
        for (std::size_t i = 0; i < f.count; ++i) {
            SynthItem item;
            item.family = f.family;
            item.archetype = f.archetype;
            item.index = i;
            item.seed = derive_seed(family_seed, i);
            Rng size_rng(derive_seed(item.seed, 0x5153));
            item.size = size_rng.between(f.min_size, f.max_size);
            char name[32];
            std::snprintf(name, sizeof name, "_%04zu.", i);
            item.relative_path = fs::path(f.family) / (f.family + name + ext);
            items.push_back(std::move(item));
        }
    }
    return items;
}

std::vector<CorpusItem> items_from_synth(std::span<const SynthItem> plan) {
    std::vector<CorpusItem> items;
    items.reserve(plan.size());
    for (const auto& item : plan) {
        items.push_back({item.family, item.relative_path.generic_string(), [item] { return generate(item); }});
    }
    return items;
}

std::vector<FileRecord> synth_corpus(const SynthSpec& spec, std::uint64_t seed, const fs::path& out_dir,
                                     unsigned jobs) {
    const auto items = plan_synth(spec, seed);
    std::vector<FileRecord> records(items.size());
    parallel_for(items.size(), jobs, [&](std::size_t i) {
        const auto bytes = generate(items[i]);
        FileRecord& rec = records[i];
        rec.path = out_dir / items[i].relative_path;
        rec.family = items[i].family;
        rec.size_bytes = bytes.size();
        rec.content_digest = sha256(std::span<const std::uint8_t>(bytes));
        write_file(rec.path, bytes);
    });
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
    return records;
}

}  // namespace erosion
