#include <string>
#include <vector>

#include <catch_amalgamated.hpp>

#include "erosion/atlas.hpp"
#include "erosion/error.hpp"
#include "erosion/evaluation.hpp"
#include "erosion/synth.hpp"

using namespace erosion;
using Catch::Approx;

namespace {

std::vector<CorpusItem> small_corpus(std::size_t per_family, std::uint64_t size, std::uint64_t seed) {
    SynthSpec spec;
    spec.families = {{"xls", Archetype::StructuredBinary, per_family, size, size, ""},
                     {"txt", Archetype::TextLike, per_family, size, size, ""}};
    return items_from_synth(plan_synth(spec, seed));
}

}  // namespace

TEST_CASE("alpha grid helper") {
    const auto g = alpha_range(0.0, 1.0, 0.1);
    REQUIRE(g.size() == 11);
    CHECK(g[3] == 0.3);
    CHECK(g.back() == 1.0);
    CHECK(alpha_range(0.25, 0.25, 0.1) == std::vector<double>{0.25});
    CHECK_THROWS_AS(alpha_range(0.0, 1.0, 0.0), Error);
}

TEST_CASE("atlas over a small corpus") {
    const auto corpus = small_corpus(4, 60000, 1);
    AtlasOptions opt;
    opt.seed = 3;
    opt.jobs = 2;
    const auto atlas = compute_atlas(corpus, opt);
    REQUIRE(atlas.files.size() == 8);
    CHECK(atlas.cells.size() == 2 * 11 * kAllMetrics.size());

    for (const auto& f : atlas.files) {
        REQUIRE(f.stats.size() == 11);
        // alpha = 0 leaves the file untouched.
        CHECK(f.stats[0].l2_to_ref == 0.0);
        CHECK(f.stats[0].tv_to_ref == 0.0);
        CHECK(f.stats[10].entropy_bits > 7.99);
    }
    for (const std::string family : {"xls", "txt"}) {
        const auto ent = atlas.series(family, Metric::Entropy);
        REQUIRE(ent.size() == 11);
        for (std::size_t i = 1; i < ent.size(); ++i) CHECK(ent[i] >= ent[i - 1] - 1e-9);
        const auto var = atlas.series(family, Metric::Variance);
        CHECK(var.front() > var.back());
        CHECK(atlas.series(family, Metric::Entropy, true).size() == 11);
    }

    const auto trends = atlas_trends(atlas);
    CHECK(trends.size() == 2 * kAllMetrics.size() * 2);
    for (const auto& t : trends) {
        if (t.family == "xls" && t.metric == Metric::Entropy && t.statistic == "median") {
            CHECK(t.mann_kendall.alternative == TrendDirection::Increasing);
            CHECK(t.mann_kendall.p_value < 0.01);
            CHECK(t.sen.slope > 0.0);
        }
    }

    // Same seed, different worker count: identical numbers.
    opt.jobs = 1;
    const auto again = compute_atlas(corpus, opt);
    for (std::size_t i = 0; i < atlas.cells.size(); ++i) CHECK(again.cells[i].band.q50 == atlas.cells[i].band.q50);

    CHECK_THROWS_AS(compute_atlas(std::vector<CorpusItem>{}, opt), Error);
}

TEST_CASE("endpoint baseline fitting") {
    const std::vector<std::string> fam = {"a", "a", "a", "a"};
    const std::vector<double> score = {0.001, 0.002, 1.5, 2.0};
    const std::vector<int> truth = {1, 1, 0, 0};
    const auto b = fit_endpoint_baseline(fam, score, truth);
    CHECK(b.theta.at("a") == Approx(0.751));

    // Overlapping scores: the smallest best candidate wins.
    const std::vector<std::string> f2 = {"b", "b"};
    const std::vector<double> s2 = {1.0, 1.0};
    const std::vector<int> t2 = {1, 0};
    CHECK(fit_endpoint_baseline(f2, s2, t2).theta.at("b") < 1.0);
}

TEST_CASE("small detection experiment") {
    const auto validation = small_corpus(3, 120000, 10);
    const auto test = small_corpus(3, 120000, 11);
    DetectionOptions opt;
    opt.alphas = {0.5, 1.0};
    opt.block_size = 16384;
    opt.seed = 5;
    const auto report = run_detection_experiment(validation, test, opt);
    REQUIRE(report.pipeline.size() == 2);
    REQUIRE(report.baseline_scores.size() == 2);
    CHECK(report.pristine_total == 6);
    CHECK(report.pipeline[0].total == 6 + 6 * 3);
    CHECK(report.per_mode.size() == 6);
    CHECK(report.thresholds.t_file.size() == 2);
    CHECK(report.baseline.theta.size() == 2);
    CHECK(report.pipeline[1].accuracy() == 1.0);
    CHECK(report.baseline_scores[1].accuracy() == 1.0);
    CHECK(report.false_positive_rate() == 0.0);
    CHECK(report.chunks_total > 0);

    DetectionOptions bad = opt;
    bad.alphas = {};
    CHECK_THROWS_AS(run_detection_experiment(validation, test, bad), Error);
}
