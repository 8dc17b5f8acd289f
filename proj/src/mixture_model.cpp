#include "erosion/mixture_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "erosion/error.hpp"
#include "erosion/parallel.hpp"
#include "erosion/rng.hpp"

namespace erosion {

namespace {

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
}

void check_family_constant(double c_squared) {
    if (!(c_squared >= 0.0) || !std::isfinite(c_squared)) {
        throw Error(ErrorCode::InvalidArgument, "c_squared must be finite and >= 0");
    }
    if (c_squared == 0.0) {
        throw Error(ErrorCode::DegenerateFamily, "c_squared == 0: the family is already uniform");
    }
}

double c_squared_of_counts(const ByteHistogram& h) {
    const double total = static_cast<double>(h.total);
    double sum = 0.0;
    for (std::uint64_t c : h.counts) {
        const double d = static_cast<double>(c) / total - kUniformProb;
        sum += d * d;
    }
    return sum;
}

}  // namespace

ByteDistribution mixture(const ByteDistribution& p_orig, double alpha) {
    check_alpha(alpha);
    ByteDistribution::Probs out{};
    for (std::size_t b = 0; b < kByteValues; ++b) {
        out[b] = alpha * kUniformProb + (1.0 - alpha) * p_orig[b];
    }
    return ByteDistribution(out);
}

double c_squared(const ByteDistribution& p_orig) noexcept {
    double sum = 0.0;
    for (double p : p_orig.probs()) {
        const double d = p - kUniformProb;
        sum += d * d;
    }
    return sum;
}

FamilyConstant estimate_family_constant(std::span<const ByteHistogram> corpus, const std::string& family,
                                        const BootstrapOptions& options) {
    if (corpus.empty()) {
        throw Error(ErrorCode::EmptyCorpus, "no cleartext files for family '" + family + "'");
    }
    if (options.subset_size < 1 || options.replicates < 1) {
        throw Error(ErrorCode::InvalidArgument, "subset_size and replicates must be >= 1");
    }
    for (const auto& h : corpus) {
        if (h.total == 0) {
            throw Error(ErrorCode::EmptyInput, "family '" + family + "' contains an empty file");
        }
    }

    std::vector<double> values(options.replicates);
    parallel_for(options.replicates, options.jobs, [&](std::size_t r) {
        Rng rng(derive_seed(options.seed, r));
        if (options.aggregation == ReplicateAggregation::PooledBytes) {
            ByteHistogram pooled;
            for (std::size_t k = 0; k < options.subset_size; ++k) {
                pooled += corpus[rng.below(corpus.size())];
            }
            values[r] = c_squared_of_counts(pooled);
        } else {
            double sum = 0.0;
            for (std::size_t k = 0; k < options.subset_size; ++k) {
                sum += c_squared_of_counts(corpus[rng.below(corpus.size())]);
            }
            values[r] = sum / static_cast<double>(options.subset_size);
        }
    });

    std::sort(values.begin(), values.end());
    FamilyConstant fc;
    fc.family = family;
    fc.c_squared_median = quantile_sorted(values, 0.5);
    fc.ci_low = quantile_sorted(values, 0.025);
    fc.ci_high = quantile_sorted(values, 0.975);
    fc.replicates = options.replicates;
    fc.subset_size = options.subset_size;
    return fc;
}

double escape_trajectory(const ByteDistribution& p_orig, double alpha) {
    check_alpha(alpha);
    // P_mix(b) / U(b) = 1 + eps_b with eps_b = 256 (1 - alpha) delta(b).
    const double leak = 1.0 - alpha;
    double sum = 0.0;
    for (std::size_t b = 0; b < kByteValues; ++b) {
        const double eps = 256.0 * leak * (p_orig[b] - kUniformProb);
        if (eps <= -1.0) {
            continue;  // empty bin contributes 0 log 0
        }
        sum += (1.0 + eps) * std::log1p(eps);
    }
    return std::max(0.0, sum / (256.0 * std::log(2.0)));
}

double ceiling(double c_squared, double alpha) {
    check_alpha(alpha);
    if (!(c_squared >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "c_squared must be >= 0");
    }
    const double leak = 1.0 - alpha;
    return kCeilingScale * c_squared * leak * leak;
}

double alpha_star(double c_squared, double tau) {
    check_family_constant(c_squared);
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw Error(ErrorCode::InvalidArgument, "tau must be finite and > 0");
    }
    const double a = 1.0 - std::sqrt(tau / (kCeilingScale * c_squared));
    return std::clamp(a, 0.0, 1.0);
}

double normalize_kl(double raw_kl, double c_squared) {
    check_family_constant(c_squared);
    if (!(raw_kl >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "raw KL must be >= 0");
    }
    return raw_kl / (kCeilingScale * c_squared);
}

LeakProfile leak_profile(const ByteDistribution& p_orig, double alpha) {
    check_alpha(alpha);
    LeakProfile lp;
    double max_abs = 0.0;
    for (std::size_t b = 0; b < kByteValues; ++b) {
        lp.delta[b] = p_orig[b] - kUniformProb;
        max_abs = std::max(max_abs, std::abs(lp.delta[b]));
    }
    lp.epsilon_max = 256.0 * (1.0 - alpha) * max_abs;
    lp.small_leak_ok = lp.epsilon_max < 1.0;
    return lp;
}

}  // namespace erosion
