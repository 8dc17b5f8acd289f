#include <algorithm>
#include <random>
#include <thread>
#include <vector>

#include <catch_amalgamated.hpp>

#include "erosion/byte_stats.hpp"
#include "erosion/crypto_sim.hpp"
#include "erosion/error.hpp"
#include "erosion/hex.hpp"

using namespace erosion;

namespace {

auto has_code(ErrorCode code) {
    return Catch::Matchers::Predicate<Error>([code](const Error& e) { return e.code() == code; });
}

EncryptionMode mode_of(ModeKind kind, double alpha, std::uint64_t block = kDefaultBlockSize) {
    EncryptionMode m;
    m.variant = kind;
    m.fraction = alpha;
    m.block_size = block;
    return m;
}

template <std::size_t N>
std::array<std::uint8_t, N> fixed(std::string_view hex) {
    const auto v = from_hex(hex);
    std::array<std::uint8_t, N> out{};
    std::copy(v.begin(), v.end(), out.begin());
    return out;
}

void check_plan_shape(const EncryptionPlan& p) {
    std::uint64_t covered = 0;
    std::uint64_t prev_end = 0;
    for (const auto& r : p.ranges) {
        CHECK(r.length > 0);
        CHECK(r.offset >= prev_end);
        CHECK(r.end() <= p.file_length);
        prev_end = r.end();
        covered += r.length;
    }
    const double expect = p.file_length ? static_cast<double>(covered) / static_cast<double>(p.file_length) : 0.0;
    CHECK(p.achieved_coverage == expect);
    CHECK(coverage(p) == expect);
}

}  // namespace

TEST_CASE("mode names") {
    CHECK(parse_mode_kind("HYBRID") == ModeKind::Hybrid);
    CHECK(to_string(ModeKind::Dot) == "dot");
    CHECK_THROWS_AS(parse_mode_kind("smart"), Error);
    CHECK_THROWS_MATCHES(validate(mode_of(ModeKind::Head, 1.2)), Error, has_code(ErrorCode::AlphaOutOfRange));
    CHECK_THROWS_MATCHES(validate(mode_of(ModeKind::Dot, 0.5, 0)), Error, has_code(ErrorCode::InvalidArgument));
}

TEST_CASE("plan examples") {
    const auto head = plan(mode_of(ModeKind::Head, 0.25), 1000);
    REQUIRE(head.ranges.size() == 1);
    CHECK(head.ranges[0] == ByteRange{0, 250});
    CHECK(coverage(head) == 0.25);

    const auto dot = plan(mode_of(ModeKind::Dot, 0.25, 65536), 131072);
    CHECK(dot.ranges == std::vector<ByteRange>{{0, 16384}, {65536, 16384}});
    CHECK(coverage(dot) == 0.25);

    // Hybrid: a rounded head inside block 0, floor-sized dots afterwards.
    const auto hybrid = plan(mode_of(ModeKind::Hybrid, 0.5, 100), 250);
    CHECK(hybrid.ranges == std::vector<ByteRange>{{0, 50}, {100, 50}, {200, 25}});

    EncryptionMode adaptive = mode_of(ModeKind::Adaptive, 0.3);
    const auto small = plan(adaptive, 1 << 20);
    REQUIRE(small.ranges.size() == 1);
    CHECK(small.ranges[0] == ByteRange{0, 1 << 20});
    CHECK(coverage(small) == 1.0);
    adaptive.size_threshold = 1000;
    CHECK(plan(adaptive, 5000).ranges == plan(mode_of(ModeKind::Hybrid, 0.3), 5000).ranges);

    CHECK(coverage(plan(mode_of(ModeKind::Full, 0.0), 77)) == 1.0);
    const auto empty = plan(mode_of(ModeKind::Full, 1.0), 0);
    CHECK(empty.ranges.empty());
    CHECK(coverage(empty) == 0.0);
    CHECK(plan(mode_of(ModeKind::Dot, 0.0), 1000).ranges.empty());
}

TEST_CASE("plans are well formed and close to the target coverage") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 500; ++trial) {
        const auto kind = std::array{ModeKind::Head, ModeKind::Dot, ModeKind::Hybrid}[trial % 3];
        // Floor slack is under one byte per block, so the bound needs n / block <= block.
        const std::uint64_t block = 500 + gen() % 4500;
        const std::uint64_t n = gen() % 200000;
        const double alpha = static_cast<double>(gen() % 1001) / 1000.0;
        const auto p = plan(mode_of(kind, alpha, block), n);
        check_plan_shape(p);
        if (n == 0) continue;
        const double slack = kind == ModeKind::Head ? 1.0 / static_cast<double>(n)
                                                    : static_cast<double>(block) / static_cast<double>(n);
        CHECK(std::abs(p.achieved_coverage - alpha) <= slack + 1e-15);
    }
}

TEST_CASE("encrypted overlap counts bytes inside ranges") {
    const auto p = plan(mode_of(ModeKind::Dot, 0.5, 100), 400);
    CHECK(encrypted_overlap(p, 0, 400) == 200);
    CHECK(encrypted_overlap(p, 25, 100) == 50);
    CHECK(encrypted_overlap(p, 50, 50) == 0);
    CHECK(encrypted_overlap(p, 390, 100) == 0);
}

TEST_CASE("apply matches the published AES-GCM ciphertext") {
    // AES-128-GCM vector with a 96-bit IV and no additional data.
    const auto key = fixed<16>("feffe9928665731c6d6a8f9467308308");
    const auto nonce = fixed<12>("cafebabefacedbaddecaf888");
    const auto pt = from_hex(
        "d9313225f88406e5a55909c5aff5269a86a7a9531534f7da2e4c303d8a318a72"
        "1c3c0c95956809532fcf0e2449a6b525b16aedf5aa0de657ba637b391aafd255");
    const auto ct = from_hex(
        "42831ec2217774244b7221b784d0d49ce3aa212f2c02a4e035c17e2329aca12e"
        "21d514b25466931c7d8f6a5aac84aa051ba30b396a0aac973d58e091473f5985");
    CHECK(apply(pt, plan(mode_of(ModeKind::Full, 1.0), pt.size()), key, nonce) == ct);

    // Two ranges form one message: the second range continues the keystream.
    EncryptionPlan split;
    split.file_length = pt.size();
    split.ranges = {{0, 16}, {32, 32}};
    split.achieved_coverage = 0.75;
    const auto out = apply(pt, split, key, nonce);
    REQUIRE(out.size() == pt.size());
    for (std::size_t i = 0; i < 16; ++i) CHECK(out[i] == ct[i]);
    for (std::size_t i = 16; i < 32; ++i) CHECK(out[i] == pt[i]);
    for (std::size_t i = 0; i < 32; ++i) {
        const std::uint8_t ks = ct[16 + i] ^ pt[16 + i];
        CHECK(out[32 + i] == (pt[32 + i] ^ ks));
    }
}

TEST_CASE("apply preserves length and untouched bytes") {
    const auto key = derive_key(5);
    std::mt19937_64 gen(8);
    std::vector<std::uint8_t> text(30000);
    for (auto& b : text) b = static_cast<std::uint8_t>('a' + gen() % 26);

    const auto none = plan(mode_of(ModeKind::Dot, 0.0, 1000), text.size());
    CHECK(apply(text, none, key, make_nonce(1, 0)) == text);

    for (auto kind : {ModeKind::Head, ModeKind::Dot, ModeKind::Hybrid}) {
        const auto p = plan(mode_of(kind, 0.4, 4096), text.size());
        const auto out = apply(text, p, key, make_nonce(1, 1));
        REQUIRE(out.size() == text.size());
        std::vector<bool> inside(text.size(), false);
        for (const auto& r : p.ranges)
            for (auto i = r.offset; i < r.end(); ++i) inside[i] = true;
        std::size_t changed = 0;
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (!inside[i]) CHECK(out[i] == text[i]);
            else changed += out[i] != text[i];
        }
        CHECK(changed > 0);
        CHECK(apply(text, p, key, make_nonce(1, 1)) == out);
        CHECK(apply(text, p, key, make_nonce(1, 2)) != out);
    }

    const std::vector<std::uint8_t> zeros(4096, 0);
    const auto full = apply(zeros, plan(mode_of(ModeKind::Full, 1.0), zeros.size()), key, make_nonce(2, 0));
    CHECK(entropy_bits(normalize(histogram(full))) >= 7.9);

    CHECK_THROWS_MATCHES(apply(zeros, plan(mode_of(ModeKind::Full, 1.0), 10), key, make_nonce(2, 0)), Error,
                         has_code(ErrorCode::LengthMismatch));
}

TEST_CASE("nonce layout and registry") {
    const auto n = make_nonce(0x01020304, 0x1122334455667788ULL);
    CHECK(to_hex(n) == "010203041122334455667788");

    NonceRegistry reg;
    reg.claim(make_nonce(0, 0));
    reg.claim(make_nonce(0, 1));
    CHECK_THROWS_MATCHES(reg.claim(make_nonce(0, 0)), Error, has_code(ErrorCode::NonceReuse));
    CHECK(reg.size() == 2);

    NonceRegistry shared;
    std::vector<std::thread> pool;
    for (std::uint32_t t = 0; t < 4; ++t)
        pool.emplace_back([&shared, t] {
            for (std::uint64_t i = 0; i < 500; ++i) shared.claim(make_nonce(t, i));
        });
    for (auto& th : pool) th.join();
    CHECK(shared.size() == 2000);
}

TEST_CASE("keys derive deterministically from the seed") {
    CHECK(derive_key(1) == derive_key(1));
    CHECK(derive_key(1) != derive_key(2));
    CHECK(key_id(derive_key(1)) == key_id(derive_key(1)));
    CHECK(key_id(derive_key(1)).find(to_hex(derive_key(1))) == std::string::npos);
}
