#include "erosion/crypto_sim.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cmath>
#include <cstring>
#include <memory>

#include <openssl/evp.h>

#include "erosion/error.hpp"
#include "erosion/hex.hpp"

namespace erosion {

namespace {

struct CipherCtxDeleter {
    void operator()(EVP_CIPHER_CTX* ctx) const noexcept { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

void crypto_check(int rc, const char* what) {
    if (rc != 1) {
        throw Error(ErrorCode::CryptoFailure, what);
    }
}

std::uint64_t floor_fraction(double alpha, std::uint64_t length) {
    // alpha * length stays far below 2^53 for any realistic file.
    const auto v = static_cast<std::uint64_t>(std::floor(alpha * static_cast<double>(length)));
    return std::min(v, length);
}

std::uint64_t round_fraction(double alpha, std::uint64_t length) {
    const auto v = static_cast<std::uint64_t>(std::floor(alpha * static_cast<double>(length) + 0.5));
    return std::min(v, length);
}

void push_range(std::vector<ByteRange>& ranges, std::uint64_t offset, std::uint64_t length) {
    if (length > 0) {
        ranges.push_back({offset, length});
    }
}

void dot_ranges(std::vector<ByteRange>& ranges, double alpha, std::uint64_t block, std::uint64_t from,
                std::uint64_t n) {
    for (std::uint64_t start = from; start < n; start += block) {
        const std::uint64_t len = std::min(block, n - start);
        push_range(ranges, start, floor_fraction(alpha, len));
    }
}

}  // namespace

std::string_view to_string(ModeKind kind) noexcept {
    switch (kind) {
        case ModeKind::Head: return "head";
        case ModeKind::Dot: return "dot";
        case ModeKind::Hybrid: return "hybrid";
        case ModeKind::Adaptive: return "adaptive";
        case ModeKind::Full: return "full";
    }
    return "head";
}

ModeKind parse_mode_kind(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (ModeKind k : {ModeKind::Head, ModeKind::Dot, ModeKind::Hybrid, ModeKind::Adaptive, ModeKind::Full}) {
        if (lower == to_string(k)) return k;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown encryption mode '" + std::string(name) + "'");
}

void validate(const EncryptionMode& mode) {
    if (!(mode.fraction >= 0.0 && mode.fraction <= 1.0)) {
        throw Error(ErrorCode::AlphaOutOfRange, "mode fraction must lie in [0, 1]");
    }
    if (mode.block_size < 1) {
        throw Error(ErrorCode::InvalidArgument, "block_size must be >= 1");
    }
    if (mode.size_threshold < 1) {
        throw Error(ErrorCode::InvalidArgument, "size_threshold must be >= 1");
    }
}

EncryptionPlan plan(const EncryptionMode& mode, std::uint64_t file_length) {
    validate(mode);
    EncryptionPlan p;
    p.mode = mode;
    p.file_length = file_length;
    const double alpha = mode.fraction;
    const std::uint64_t n = file_length;

    ModeKind effective = mode.variant;
    if (effective == ModeKind::Adaptive) {
        effective = n <= mode.size_threshold ? ModeKind::Full : ModeKind::Hybrid;
    }
    switch (effective) {
        case ModeKind::Head:
            push_range(p.ranges, 0, round_fraction(alpha, n));
            break;
        case ModeKind::Dot:
            dot_ranges(p.ranges, alpha, mode.block_size, 0, n);
            break;
        case ModeKind::Hybrid: {
            const std::uint64_t first = std::min(mode.block_size, n);
            push_range(p.ranges, 0, round_fraction(alpha, first));
            dot_ranges(p.ranges, alpha, mode.block_size, first, n);
            break;
        }
        case ModeKind::Full:
        case ModeKind::Adaptive:
            push_range(p.ranges, 0, n);
            break;
    }
    p.achieved_coverage = coverage(p);
    return p;
}

double coverage(const EncryptionPlan& plan) noexcept {
    if (plan.file_length == 0) {
        return 0.0;
    }
    std::uint64_t covered = 0;
    for (const auto& r : plan.ranges) covered += r.length;
    return static_cast<double>(covered) / static_cast<double>(plan.file_length);
}

std::uint64_t encrypted_overlap(const EncryptionPlan& plan, std::uint64_t offset, std::uint64_t length) noexcept {
    const std::uint64_t end = offset + length;
    std::uint64_t overlap = 0;
    for (const auto& r : plan.ranges) {
        const std::uint64_t lo = std::max(offset, r.offset);
        const std::uint64_t hi = std::min(end, r.end());
        if (hi > lo) overlap += hi - lo;
    }
    return overlap;
}

std::vector<std::uint8_t> apply(std::span<const std::uint8_t> plaintext, const EncryptionPlan& plan,
                                const AesKey& key, const GcmNonce& nonce) {
    if (plan.file_length != plaintext.size()) {
        throw Error(ErrorCode::LengthMismatch, "plan is for " + std::to_string(plan.file_length) +
                                                   " bytes, input has " + std::to_string(plaintext.size()));
    }
    std::vector<std::uint8_t> out(plaintext.begin(), plaintext.end());
    if (plan.ranges.empty()) {
        return out;
    }

    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) {
        throw Error(ErrorCode::CryptoFailure, "EVP_CIPHER_CTX_new");
    }
    crypto_check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, nullptr, nullptr), "init cipher");
    crypto_check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(nonce.size()), nullptr),
                 "set iv length");
    crypto_check(EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()), "set key/iv");

    constexpr std::uint64_t kMaxUpdate = 1u << 30;
    for (const auto& r : plan.ranges) {
        if (r.end() > plaintext.size()) {
            throw Error(ErrorCode::LengthMismatch, "plan range exceeds input");
        }
        for (std::uint64_t done = 0; done < r.length;) {
            const std::uint64_t step = std::min(kMaxUpdate, r.length - done);
            int written = 0;
            crypto_check(EVP_EncryptUpdate(ctx.get(), out.data() + r.offset + done, &written,
                                           plaintext.data() + r.offset + done, static_cast<int>(step)),
                         "encrypt");
            if (static_cast<std::uint64_t>(written) != step) {
                throw Error(ErrorCode::CryptoFailure, "GCM produced a short block");
            }
            done += step;
        }
    }
    std::array<std::uint8_t, 16> scratch{};
    int tail = 0;
    crypto_check(EVP_EncryptFinal_ex(ctx.get(), scratch.data(), &tail), "finalize");
    std::array<std::uint8_t, 16> tag{};
    crypto_check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, static_cast<int>(tag.size()), tag.data()),
                 "get tag");
    return out;
}

void NonceRegistry::claim(const GcmNonce& nonce) {
    std::lock_guard lock(mutex_);
    if (!seen_.insert(nonce).second) {
        throw Error(ErrorCode::NonceReuse, "nonce " + to_hex(nonce) + " used twice in one run");
    }
}

std::size_t NonceRegistry::size() const {
    std::lock_guard lock(mutex_);
    return seen_.size();
}

AesKey derive_key(std::uint64_t seed) {
    std::string material = "erosion-run-key:";
    for (int i = 0; i < 8; ++i) material.push_back(static_cast<char>((seed >> (8 * i)) & 0xff));
    const auto digest = sha256(std::as_bytes(std::span(material.data(), material.size())));
    AesKey key{};
    std::copy_n(digest.begin(), key.size(), key.begin());
    return key;
}

std::string key_id(const AesKey& key) {
    const auto digest = sha256(std::as_bytes(std::span(key)));
    return to_hex(std::span(digest.data(), 8));
}

GcmNonce make_nonce(std::uint32_t stream, std::uint64_t counter) noexcept {
    GcmNonce n{};
    for (int i = 0; i < 4; ++i) n[i] = static_cast<std::uint8_t>(stream >> (24 - 8 * i));
    for (int i = 0; i < 8; ++i) n[4 + i] = static_cast<std::uint8_t>(counter >> (56 - 8 * i));
    return n;
}

}  // namespace erosion
