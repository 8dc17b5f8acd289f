// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//
//   acceptance                 run every criterion
//   acceptance --only NAME     run a single criterion
//   acceptance --list          print criterion names

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "erosion/atlas.hpp"
#include "erosion/byte_stats.hpp"
#include "erosion/crypto_sim.hpp"
#include "erosion/evaluation.hpp"
#include "erosion/hist_image.hpp"
#include "erosion/mixture_model.hpp"
#include "erosion/synth.hpp"
#include "erosion/trend.hpp"
#include "support/oracles.hpp"

using namespace erosion;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

constexpr std::uint64_t kMegabyte = 1 << 20;

// ---------------------------------------------------------------------------

Verdict ceiling_soundness() {
    const auto start = Clock::now();
    std::mt19937_64 gen(20240601);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t accepted = 0;
    std::size_t violations = 0;
    double worst_gap = -1e300;
    while (accepted < 1000) {
        // Perturbations of uniform with a random spread, so both tight and
        // loose leaks appear.
        const double spread = std::pow(unit(gen), 2.0) * 2.0;
        ByteDistribution::Probs p{};
        double sum = 0.0;
        for (auto& v : p) {
            v = std::max(0.0, 1.0 + spread * (2.0 * unit(gen) - 1.0));
            sum += v;
        }
        for (auto& v : p) v /= sum;
        const ByteDistribution dist(p);
        const double alpha = unit(gen);
        if (!leak_profile(dist, alpha).small_leak_ok) continue;
        ++accepted;
        const double gap = escape_trajectory(dist, alpha) - ceiling(c_squared(dist), alpha);
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-12) ++violations;
    }
    const double elapsed = seconds_since(start);
    return {violations == 0 && elapsed < 10.0,
            fmt("%zu pairs, %zu violations, max(KL - ceiling) = %.3g, %.2f s", accepted, violations, worst_gap,
                elapsed)};
}

Verdict closed_forms() {
    const auto one_hot = ByteDistribution::one_hot(0);
    const double c2 = c_squared(one_hot);
    const double kl = kl_divergence_bits(one_hot, ByteDistribution::uniform(), 0.0);
    const double xls = alpha_star(0.179274, 0.01);
    const double mp4 = alpha_star(0.000250, 0.01);
    const bool ok = std::abs(c2 - 255.0 / 256.0) <= 1e-12 && std::abs(kl - 8.0) <= 1e-12 &&
                    std::abs(xls - 0.98771) <= 1e-4 && std::abs(mp4 - 0.67092) <= 1e-4 && xls > mp4;
    return {ok, fmt("c2(one-hot)=%.15f KL=%.15f alpha*(xls)=%.6f alpha*(mp4)=%.6f", c2, kl, xls, mp4)};
}

Verdict trend_oracles() {
    // The budget covers the library calls; the integration-based oracle is slow by design.
    double elapsed = 0.0;
    std::mt19937_64 gen(77);
    std::size_t mismatches = 0;
    double worst_p = 0.0;
    double worst_ci = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + gen() % 48;
        std::vector<double> y(n);
        const int shape = trial % 4;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i);
            const double noise = std::ldexp(static_cast<double>(gen() >> 11), -53);
            switch (shape) {
                case 0: y[i] = noise; break;
                case 1: y[i] = 0.02 * t + noise; break;
                case 2: y[i] = static_cast<double>(gen() % 5); break;  // heavy ties
                default: y[i] = -0.05 * t + static_cast<double>(gen() % 3); break;
            }
        }
        const auto start = Clock::now();
        const auto inc = mann_kendall(y, TrendDirection::Increasing);
        const auto dec = mann_kendall(y, TrendDirection::Decreasing);
        const auto s = sen_slope(y);
        elapsed += seconds_since(start);
        const auto o = oracle::mann_kendall(y);
        const auto so = oracle::sen(y);
        if (inc.s_statistic != o.s || s.slope != so.slope) ++mismatches;
        if (std::abs(inc.variance_s - o.variance) > 1e-9 * std::max(1.0, o.variance)) ++mismatches;
        worst_p = std::max({worst_p, std::abs(inc.p_value - o.p_increasing), std::abs(dec.p_value - o.p_decreasing)});
        worst_ci = std::max({worst_ci, std::abs(s.ci_low - so.ci_low), std::abs(s.ci_high - so.ci_high)});
    }
    return {mismatches == 0 && worst_p <= 1e-9 && worst_ci <= 1e-9 && elapsed < 5.0,
            fmt("200 series, %zu exact mismatches, max |dp| = %.3g, max |dCI| = %.3g, %.2f s", mismatches, worst_p,
                worst_ci, elapsed)};
}

SynthSpec atlas_spec(std::size_t files_per_family) {
    SynthSpec spec;
    spec.families = {{"xls", Archetype::StructuredBinary, files_per_family, kMegabyte - 65536, kMegabyte + 65536, ""},
                     {"mp4", Archetype::Precompressed, files_per_family, kMegabyte - 65536, kMegabyte + 65536, ""}};
    return spec;
}

Verdict atlas_monotonicity() {
    const auto start = Clock::now();
    const auto items = items_from_synth(plan_synth(atlas_spec(200), 1001));
    AtlasOptions opt;
    opt.mode.variant = ModeKind::Head;
    opt.seed = 1002;
    opt.jobs = worker_count();
    const auto atlas = compute_atlas(items, opt);

    const auto entropy = atlas.series("xls", Metric::Entropy);
    const auto var = atlas.series("xls", Metric::Variance);
    const auto mk_entropy = mann_kendall(entropy, TrendDirection::Increasing);
    const auto mk_var = mann_kendall(var, TrendDirection::Decreasing);
    const auto sen_mp4 = sen_slope(atlas.series("mp4", Metric::Entropy));
    const double elapsed = seconds_since(start);

    const bool ok = mk_entropy.p_value < 0.01 && mk_var.p_value < 0.01 && sen_mp4.slope >= 0.0 &&
                    sen_mp4.slope <= 0.02 && elapsed < 300.0;
    return {ok, fmt("structured entropy MK p=%.3g, variance MK(decreasing) p=%.3g, precompressed entropy Sen "
                    "slope=%.5f per 0.1 alpha, %zu files, %.1f s",
                    mk_entropy.p_value, mk_var.p_value, sen_mp4.slope, atlas.files.size(), elapsed)};
}

Verdict endpoint_statistics() {
    // Fully encrypted versions of every archetype.
    SynthSpec spec = atlas_spec(200);
    spec.families.push_back({"txt", Archetype::TextLike, 200, kMegabyte - 65536, kMegabyte + 65536, ""});
    const auto items = items_from_synth(plan_synth(spec, 1001));
    AtlasOptions opt;
    opt.alpha_grid = {1.0};
    opt.seed = 1003;
    opt.jobs = worker_count();
    const auto atlas = compute_atlas(items, opt);

    std::size_t checked = 0;
    std::size_t low_entropy = 0;
    std::size_t skew_out = 0;
    double min_entropy = 8.0;
    double max_skew = 0.0;
    for (const auto& f : atlas.files) {
        if (f.size_bytes < 100 * 1024) continue;
        ++checked;
        const auto& s = f.stats.front();
        min_entropy = std::min(min_entropy, s.entropy_bits);
        max_skew = std::max(max_skew, std::abs(s.skewness));
        low_entropy += s.entropy_bits < 7.99 ? 1 : 0;
        skew_out += std::abs(s.skewness) > 0.25 ? 1 : 0;
    }
    return {checked > 0 && low_entropy == 0 && skew_out == 0,
            fmt("%zu files at alpha=1: entropy < 7.99 in %zu (min %.5f); |skewness| > 0.25 in %zu (max %.3f)", checked,
                low_entropy, min_entropy, skew_out, max_skew)};
}

Verdict coverage_accuracy() {
    std::mt19937_64 gen(5150);
    std::size_t failures = 0;
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        EncryptionMode mode;
        mode.variant = trial % 2 ? ModeKind::Dot : ModeKind::Hybrid;
        mode.fraction = static_cast<double>(gen() % 1001) / 1000.0;
        const std::uint64_t n = 1 + gen() % (64 * kMegabyte);
        const auto p = plan(mode, n);
        const double bound = static_cast<double>(mode.block_size) / static_cast<double>(n);
        const double err = std::abs(p.achieved_coverage - mode.fraction);
        worst_ratio = std::max(worst_ratio, err / bound);
        if (err > bound) ++failures;
    }
    return {failures == 0, fmt("100 Dot/Hybrid cases, %zu outside block_size/N, worst error = %.3g of the bound",
                               failures, worst_ratio)};
}

Verdict encoding() {
    std::vector<std::string> problems;

    const auto zeros = encode(histogram(std::vector<std::uint8_t>(4096, 0)));
    bool one_hot_ok = zeros.pixels[0] == 255;
    for (std::size_t b = 1; b < 256; ++b) one_hot_ok = one_hot_ok && zeros.pixels[b] == 0;
    if (!one_hot_ok) problems.push_back("one-hot");

    const auto empty = encode(ByteHistogram{});
    if (std::any_of(empty.pixels.begin(), empty.pixels.end(), [](auto px) { return px != 0; })) {
        problems.push_back("empty");
    }

    std::vector<std::uint8_t> plain(kMegabyte, 0);
    EncryptionMode full;
    full.variant = ModeKind::Full;
    const auto cipher = apply(plain, plan(full, plain.size()), derive_key(31), make_nonce(31, 0));
    const auto white = encode(histogram(cipher));
    const auto min_px = *std::min_element(white.pixels.begin(), white.pixels.end());
    if (min_px < 200) problems.push_back("encrypted min pixel " + std::to_string(min_px));

    const auto dir = fs::temp_directory_path() / "erosion_acceptance_pgm";
    fs::create_directories(dir);
    std::mt19937_64 gen(404);
    std::size_t round_trip_failures = 0;
    for (int i = 0; i < 100; ++i) {
        HistImage img;
        for (auto& px : img.pixels) px = static_cast<std::uint8_t>(gen());
        const auto path = dir / ("img_" + std::to_string(i) + ".pgm");
        write_image(img, path);
        if (!(read_image(path) == img)) ++round_trip_failures;
    }
    fs::remove_all(dir);
    if (round_trip_failures) problems.push_back(std::to_string(round_trip_failures) + " round trips");

    std::string detail = fmt("one-hot single 255 pixel, empty all zero, encrypted 1 MB min pixel %d, 100 PGM round trips",
                             static_cast<int>(min_px));
    for (const auto& p : problems) detail += "; failed: " + p;
    return {problems.empty(), detail};
}

// Shared by the detection and brittleness criteria.
DetectionReport detection_report(double& elapsed) {
    const auto start = Clock::now();
    auto split = [](std::size_t count, std::uint64_t seed) {
        SynthSpec spec;
        spec.families = {{"xls", Archetype::StructuredBinary, count, 200 * 1024, kMegabyte, ""},
                         {"txt", Archetype::TextLike, count, 200 * 1024, kMegabyte, ""}};
        return items_from_synth(plan_synth(spec, seed));
    };
    const auto validation = split(40, 2001);
    const auto test = split(60, 2002);
    DetectionOptions opt;
    opt.alphas = {0.1, 0.25, 0.5, 0.75, 1.0};
    opt.modes = {ModeKind::Head, ModeKind::Dot, ModeKind::Hybrid};
    opt.seed = 2003;
    opt.jobs = worker_count();
    auto report = run_detection_experiment(validation, test, opt);
    elapsed = seconds_since(start);
    return report;
}

Verdict detection() {
    double elapsed = 0.0;
    const auto report = detection_report(elapsed);
    bool ok = report.false_positive_rate() <= 0.02 && elapsed < 600.0;
    std::string detail;
    for (const auto& s : report.pipeline) {
        const bool asserted = s.alpha >= 0.25;
        if (asserted && s.accuracy() < 0.95) ok = false;
        detail += fmt("alpha=%g acc=%.4f%s, ", s.alpha, s.accuracy(), asserted ? "" : " (reported)");
    }
    detail += fmt("FPR=%.4f, %.1f s", report.false_positive_rate(), elapsed);
    for (const auto& [family, t] : report.thresholds.t_file) detail += fmt("; t_file[%s]=%g", family.c_str(), t);
    for (const auto& m : report.per_mode) {
        if (m.alpha == 0.1) {
            detail += fmt("; %s@0.1 %zu/%zu", std::string(to_string(m.mode)).c_str(), m.detected, m.total);
        }
    }
    return {ok, detail};
}

Verdict endpoint_brittleness() {
    double elapsed = 0.0;
    const auto report = detection_report(elapsed);
    for (std::size_t i = 0; i < report.pipeline.size(); ++i) {
        if (report.pipeline[i].alpha != 0.25) continue;
        const double pipe = report.pipeline[i].accuracy();
        const double base = report.baseline_scores[i].accuracy();
        return {base < pipe, fmt("alpha=0.25: endpoint baseline %.4f vs calibrated pipeline %.4f", base, pipe)};
    }
    return {false, "alpha 0.25 missing from the run"};
}

struct Criterion {
    std::string name;
    std::function<Verdict()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {"ceiling_soundness", ceiling_soundness},
        {"closed_forms", closed_forms},
        {"trend_oracles", trend_oracles},
        {"atlas_monotonicity", atlas_monotonicity},
        {"endpoint_statistics", endpoint_statistics},
        {"coverage_accuracy", coverage_accuracy},
        {"encoding", encoding},
        {"detection", detection},
        {"endpoint_brittleness", endpoint_brittleness},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    std::string only;
    bool list = false;
    app.add_option("--only", only, "Run a single criterion");
    app.add_flag("--list", list, "Print criterion names");
    CLI11_PARSE(app, argc, argv);

    if (list) {
        for (const auto& c : criteria()) std::cout << c.name << '\n';
        return 0;
    }
    int failures = 0;
    int ran = 0;
    for (const auto& c : criteria()) {
        if (!only.empty() && c.name != only) continue;
        ++ran;
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (v.pass ? "PASS " : "FAIL ") << c.name << ": " << v.detail << std::endl;
        failures += v.pass ? 0 : 1;
    }
    if (ran == 0) {
        std::cerr << "unknown criterion '" << only << "'\n";
        return 2;
    }
    return failures ? 1 : 0;
}
