#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace erosion {

enum class ModeKind { Head, Dot, Hybrid, Adaptive, Full };

[[nodiscard]] std::string_view to_string(ModeKind kind) noexcept;
/// Accepts "head", "dot", "hybrid", "adaptive", "full" (case-insensitive).
[[nodiscard]] ModeKind parse_mode_kind(std::string_view name);

inline constexpr std::uint64_t kDefaultBlockSize = 64 * 1024;
inline constexpr std::uint64_t kDefaultSizeThreshold = 10 * 1024 * 1024;

/// An intermittent-encryption strategy with its target coverage.
struct EncryptionMode {
    ModeKind variant = ModeKind::Head;
    double fraction = 1.0;                              // target coverage alpha
    std::uint64_t block_size = kDefaultBlockSize;       // Dot / Hybrid
    std::uint64_t size_threshold = kDefaultSizeThreshold;  // Adaptive

    bool operator==(const EncryptionMode&) const = default;
};

struct ByteRange {
    std::uint64_t offset = 0;
    std::uint64_t length = 0;

    [[nodiscard]] std::uint64_t end() const noexcept { return offset + length; }
    bool operator==(const ByteRange&) const = default;
};

/// Ground truth of which bytes a mode encrypts in a file of a given length.
/// Ranges are sorted, non-empty and non-overlapping.
struct EncryptionPlan {
    std::vector<ByteRange> ranges;
    std::uint64_t file_length = 0;
    double achieved_coverage = 0.0;
    EncryptionMode mode;

    bool operator==(const EncryptionPlan&) const = default;
};

using AesKey = std::array<std::uint8_t, 16>;
using GcmNonce = std::array<std::uint8_t, 12>;

/// Validates mode parameters; Error(AlphaOutOfRange) or Error(InvalidArgument).
void validate(const EncryptionMode& mode);

/// Head: [0, round(alpha N)).
/// Dot: in each block_size block, its first floor(alpha * block_len) bytes.
/// Hybrid: Head over block 0, Dot over the remaining blocks.
/// Adaptive: Full when N <= size_threshold, Hybrid otherwise.
/// Full: [0, N).
[[nodiscard]] EncryptionPlan plan(const EncryptionMode& mode, std::uint64_t file_length);

/// Sum of range lengths over file length; 0 for an empty file.
[[nodiscard]] double coverage(const EncryptionPlan& plan) noexcept;

/// Number of bytes of [offset, offset + length) that fall inside the plan's ranges.
[[nodiscard]] std::uint64_t encrypted_overlap(const EncryptionPlan& plan, std::uint64_t offset,
                                              std::uint64_t length) noexcept;

/// Replaces every planned byte with AES-128-GCM ciphertext. The ranges are
/// encrypted in order as one GCM message; the tag is computed and dropped so
/// the output length equals the input length. Bytes outside the ranges are
/// copied unchanged. Error(LengthMismatch) if the plan was made for a
/// different length.
[[nodiscard]] std::vector<std::uint8_t> apply(std::span<const std::uint8_t> plaintext, const EncryptionPlan& plan,
                                              const AesKey& key, const GcmNonce& nonce);

/// Rejects nonce reuse within one run. Safe to share between threads.
class NonceRegistry {
public:
    /// Error(NonceReuse) when the nonce was already claimed.
    void claim(const GcmNonce& nonce);
    [[nodiscard]] std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::set<GcmNonce> seen_;
};

/// Deterministic key for a run: the first 16 bytes of SHA-256 over a label and the seed.
[[nodiscard]] AesKey derive_key(std::uint64_t seed);
/// Short public identifier of a key (hex of a hash prefix), safe to write to manifests.
[[nodiscard]] std::string key_id(const AesKey& key);
/// Nonce = 4-byte stream tag || 8-byte big-endian counter.
[[nodiscard]] GcmNonce make_nonce(std::uint32_t stream, std::uint64_t counter) noexcept;

}  // namespace erosion
