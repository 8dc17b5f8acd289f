#include "erosion/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "erosion/byte_stats.hpp"
#include "erosion/error.hpp"
#include "erosion/parallel.hpp"

namespace erosion {

namespace {

constexpr std::uint32_t kPristine = 0xFF;
constexpr std::uint32_t kFullVariant = 0xFE;

struct Outcome {
    std::uint32_t mode = kPristine;  // index into options.modes, or a marker
    std::size_t alpha = 0;
    double p = 0.0;
    double whole_kl = 0.0;
    std::size_t chunks_total = 0;
    std::size_t chunks_correct = 0;
};

struct FileOutcomes {
    std::string family;
    std::vector<Outcome> variants;
};

double whole_file_kl(std::span<const std::uint8_t> bytes) {
    return kl_divergence_bits(normalize(histogram(bytes)), ByteDistribution::uniform(), 0.0);
}

Outcome score(std::span<const std::uint8_t> bytes, const EncryptionPlan* plan, const DetectionOptions& options) {
    Outcome o;
    const auto verdicts = classify_chunks_stat(bytes, options.theta_chunk, options.chunk_len);
    o.p = aggregate(verdicts, 0.0).encrypted_fraction;
    o.whole_kl = whole_file_kl(bytes);
    if (plan != nullptr) {
        const auto truth = chunk_truth(*plan, options.chunk_len);
        o.chunks_total = truth.size();
        for (std::size_t c = 0; c < truth.size(); ++c) o.chunks_correct += truth[c] == verdicts[c].label ? 1 : 0;
    }
    return o;
}

std::vector<FileOutcomes> evaluate_split(std::span<const CorpusItem> items, std::uint32_t split,
                                         bool with_full_variant, const DetectionOptions& options,
                                         const AesKey& key, NonceRegistry& nonces) {
    std::vector<FileOutcomes> out(items.size());
    parallel_for(items.size(), options.jobs, [&](std::size_t i) {
        const auto plaintext = items[i].load();
        if (plaintext.empty()) {
            throw Error(ErrorCode::EmptyInput, items[i].name + " is empty");
        }
        FileOutcomes& f = out[i];
        f.family = items[i].family;
        f.variants.push_back(score(plaintext, nullptr, options));

        auto run_variant = [&](ModeKind kind, double alpha, std::uint32_t mode_tag, std::size_t alpha_idx) {
            const EncryptionMode mode{kind, alpha, options.block_size, kDefaultSizeThreshold};
            const auto p = plan(mode, plaintext.size());
            const auto nonce = make_nonce((split << 24) | (mode_tag << 8) | static_cast<std::uint32_t>(alpha_idx), i);
            nonces.claim(nonce);
            const auto ciphertext = apply(plaintext, p, key, nonce);
            Outcome o = score(ciphertext, &p, options);
            o.mode = mode_tag;
            o.alpha = alpha_idx;
            f.variants.push_back(o);
        };
        for (std::size_t m = 0; m < options.modes.size(); ++m) {
            for (std::size_t a = 0; a < options.alphas.size(); ++a) {
                run_variant(options.modes[m], options.alphas[a], static_cast<std::uint32_t>(m), a);
            }
        }
        if (with_full_variant) run_variant(ModeKind::Full, 1.0, kFullVariant, 0xFF);
    });
    return out;
}

}  // namespace

EndpointBaseline fit_endpoint_baseline(std::span<const std::string> families, std::span<const double> scores,
                                       std::span<const int> truth) {
    if (families.size() != scores.size() || scores.size() != truth.size()) {
        throw Error(ErrorCode::LengthMismatch, "baseline inputs differ in length");
    }
    if (families.empty()) {
        throw Error(ErrorCode::EmptyFamily, "no endpoint samples");
    }
    std::map<std::string, std::vector<std::size_t>> by_family;
    for (std::size_t i = 0; i < families.size(); ++i) by_family[families[i]].push_back(i);

    EndpointBaseline baseline;
    for (const auto& [family, idx] : by_family) {
        std::vector<double> distinct;
        std::size_t pos = 0;
        for (auto i : idx) {
            distinct.push_back(scores[i]);
            pos += truth[i] == 1 ? 1 : 0;
        }
        const std::size_t neg = idx.size() - pos;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        std::vector<double> candidates = {distinct.front() - 1.0};
        for (std::size_t k = 0; k + 1 < distinct.size(); ++k) candidates.push_back(0.5 * (distinct[k] + distinct[k + 1]));
        candidates.push_back(distinct.back());

        double best = -1.0;
        double best_theta = candidates.front();
        for (double theta : candidates) {
            std::size_t tp = 0;
            std::size_t tn = 0;
            for (auto i : idx) {
                const bool flagged = scores[i] <= theta;
                if (truth[i] == 1 && flagged) ++tp;
                if (truth[i] == 0 && !flagged) ++tn;
            }
            double rates = 0.0;
            int classes = 0;
            if (pos > 0) rates += double(tp) / double(pos), ++classes;
            if (neg > 0) rates += double(tn) / double(neg), ++classes;
            const double ba = rates / classes;
            if (ba > best) {
                best = ba;
                best_theta = theta;
            }
        }
        baseline.theta[family] = best_theta;
    }
    return baseline;
}

DetectionReport run_detection_experiment(std::span<const CorpusItem> validation, std::span<const CorpusItem> test,
                                         const DetectionOptions& options) {
    if (validation.empty() || test.empty()) {
        throw Error(ErrorCode::EmptyCorpus, "detection needs validation and test files");
    }
    if (options.alphas.empty() || options.modes.empty() || options.alphas.size() >= 0xFF || options.modes.size() >= 0xFE) {
        throw Error(ErrorCode::InvalidArgument, "detection needs 1..253 modes and 1..254 alphas");
    }
    const AesKey key = derive_key(options.seed);
    NonceRegistry nonces;
    const auto val = evaluate_split(validation, 1, true, options, key, nonces);
    const auto tst = evaluate_split(test, 2, false, options, key, nonces);

    DetectionReport report;

    std::vector<CalibrationSample> samples;
    std::vector<std::string> endpoint_family;
    std::vector<double> endpoint_score;
    std::vector<int> endpoint_truth;
    for (const auto& f : val) {
        for (const auto& o : f.variants) {
            const int truth = o.mode == kPristine ? 0 : 1;
            if (o.mode != kFullVariant) samples.push_back({f.family, o.p, truth});
            if (o.mode == kPristine || o.mode == kFullVariant) {
                endpoint_family.push_back(f.family);
                endpoint_score.push_back(o.whole_kl);
                endpoint_truth.push_back(truth);
            }
        }
    }
    report.thresholds = calibrate_thresholds(samples, options.grid_step);
    report.baseline = fit_endpoint_baseline(endpoint_family, endpoint_score, endpoint_truth);

    for (std::size_t a = 0; a < options.alphas.size(); ++a) {
        report.pipeline.push_back({options.alphas[a], 0, 0});
        report.baseline_scores.push_back({options.alphas[a], 0, 0});
    }
    for (std::size_t m = 0; m < options.modes.size(); ++m) {
        for (double alpha : options.alphas) report.per_mode.push_back({options.modes[m], alpha, 0, 0});
    }

    for (const auto& f : tst) {
        const double t_file = report.thresholds.at(f.family);
        const auto theta_it = report.baseline.theta.find(f.family);
        if (theta_it == report.baseline.theta.end()) {
            throw Error(ErrorCode::UnknownFamily, "no baseline threshold for family '" + f.family + "'");
        }
        for (const auto& o : f.variants) {
            const int pipeline_label = o.p >= t_file ? 1 : 0;
            const int baseline_label = o.whole_kl <= theta_it->second ? 1 : 0;
            if (o.mode == kPristine) {
                ++report.pristine_total;
                report.pristine_flagged += static_cast<std::size_t>(pipeline_label);
                for (std::size_t a = 0; a < options.alphas.size(); ++a) {
                    ++report.pipeline[a].total;
                    ++report.baseline_scores[a].total;
                    report.pipeline[a].correct += pipeline_label == 0 ? 1 : 0;
                    report.baseline_scores[a].correct += baseline_label == 0 ? 1 : 0;
                }
                continue;
            }
            ++report.pipeline[o.alpha].total;
            ++report.baseline_scores[o.alpha].total;
            report.pipeline[o.alpha].correct += static_cast<std::size_t>(pipeline_label);
            report.baseline_scores[o.alpha].correct += static_cast<std::size_t>(baseline_label);
            auto& cell = report.per_mode[o.mode * options.alphas.size() + o.alpha];
            ++cell.total;
            cell.detected += static_cast<std::size_t>(pipeline_label);
            report.chunks_total += o.chunks_total;
            report.chunks_correct += o.chunks_correct;
        }
    }
    return report;
}

}  // namespace erosion
