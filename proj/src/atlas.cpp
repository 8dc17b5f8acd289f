#include "erosion/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "erosion/error.hpp"
#include "erosion/parallel.hpp"

namespace erosion {

std::string_view to_string(Metric m) noexcept {
    switch (m) {
        case Metric::Entropy: return "entropy";
        case Metric::Variance: return "variance";
        case Metric::Skewness: return "skewness";
        case Metric::Euclidean: return "euclidean";
        case Metric::Kl: return "kl";
        case Metric::TotalVariation: return "tv";
    }
    return "?";
}

double metric_value(const StatVector& s, Metric m) noexcept {
    switch (m) {
        case Metric::Entropy: return s.entropy_bits;
        case Metric::Variance: return s.variance;
        case Metric::Skewness: return s.skewness;
        case Metric::Euclidean: return s.l2_to_ref;
        case Metric::Kl: return s.kl_to_ref_bits;
        case Metric::TotalVariation: return s.tv_to_ref;
    }
    return 0.0;
}

std::vector<double> alpha_range(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorCode::InvalidArgument, "alpha range needs lo <= hi and step > 0");
    }
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> grid;
    for (std::size_t k = 0; k <= n; ++k) {
        grid.push_back(std::round((lo + static_cast<double>(k) * step) * 1e12) / 1e12);
    }
    return grid;
}

std::vector<double> AtlasResult::series(std::string_view family, Metric metric, bool iqr) const {
    std::vector<std::pair<double, double>> points;
    for (const auto& c : cells) {
        if (c.family == family && c.metric == metric) points.emplace_back(c.alpha, iqr ? c.band.iqr() : c.band.q50);
    }
    std::sort(points.begin(), points.end());
    std::vector<double> out;
    for (const auto& p : points) out.push_back(p.second);
    return out;
}

AtlasResult compute_atlas(std::span<const CorpusItem> corpus, const AtlasOptions& options) {
    if (corpus.empty()) {
        throw Error(ErrorCode::EmptyCorpus, "atlas needs at least one file");
    }
    if (options.alpha_grid.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty alpha grid");
    }
    for (double a : options.alpha_grid) {
        EncryptionMode m = options.mode;
        m.fraction = a;
        validate(m);
    }

    const AesKey key = derive_key(options.seed);
    NonceRegistry nonces;
    AtlasResult result;
    result.alpha_grid = options.alpha_grid;
    result.files.resize(corpus.size());

    parallel_for(corpus.size(), options.jobs, [&](std::size_t i) {
        const auto plaintext = corpus[i].load();
        if (plaintext.empty()) {
            throw Error(ErrorCode::EmptyInput, corpus[i].name + " is empty");
        }
        const ByteHistogram reference = histogram(plaintext);
        AtlasFile& file = result.files[i];
        file.family = corpus[i].family;
        file.name = corpus[i].name;
        file.size_bytes = plaintext.size();
        for (std::size_t k = 0; k < options.alpha_grid.size(); ++k) {
            EncryptionMode m = options.mode;
            m.fraction = options.alpha_grid[k];
            const auto p = plan(m, plaintext.size());
            const auto nonce = make_nonce(static_cast<std::uint32_t>(k), i);
            nonces.claim(nonce);
            const auto ciphertext = apply(plaintext, p, key, nonce);
            file.stats.push_back(stat_vector(normalize(histogram(ciphertext)), reference, options.kl_smoothing));
        }
    });

    std::map<std::string, std::vector<const AtlasFile*>> by_family;
    for (const auto& f : result.files) by_family[f.family].push_back(&f);
    for (const auto& [family, files] : by_family) {
        for (Metric metric : kAllMetrics) {
            for (std::size_t k = 0; k < options.alpha_grid.size(); ++k) {
                std::vector<double> values;
                values.reserve(files.size());
                for (const auto* f : files) values.push_back(metric_value(f->stats[k], metric));
                result.cells.push_back({family, options.alpha_grid[k], metric, quantile_band(values)});
            }
        }
    }
    std::sort(result.cells.begin(), result.cells.end(), [](const AtlasCell& a, const AtlasCell& b) {
        if (a.family != b.family) return a.family < b.family;
        if (a.metric != b.metric) return to_string(a.metric) < to_string(b.metric);
        return a.alpha < b.alpha;
    });
    return result;
}

std::vector<TrendRow> atlas_trends(const AtlasResult& atlas) {
    std::vector<std::string> families;
    for (const auto& c : atlas.cells) {
        if (families.empty() || families.back() != c.family) families.push_back(c.family);
    }
    std::vector<Metric> metrics(kAllMetrics.begin(), kAllMetrics.end());
    std::sort(metrics.begin(), metrics.end(), [](Metric a, Metric b) { return to_string(a) < to_string(b); });

    std::vector<TrendRow> rows;
    for (const auto& family : families) {
        for (Metric metric : metrics) {
            for (bool iqr : {false, true}) {
                const auto s = atlas.series(family, metric, iqr);
                if (s.size() < 3) continue;
                TrendRow row;
                row.family = family;
                row.metric = metric;
                row.statistic = iqr ? "iqr" : "median";
                row.mann_kendall = mann_kendall(s, TrendDirection::Increasing);
                if (row.mann_kendall.s_statistic < 0) row.mann_kendall = mann_kendall(s, TrendDirection::Decreasing);
                row.sen = sen_slope(s);
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

}  // namespace erosion
