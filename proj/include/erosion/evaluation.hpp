#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "erosion/chunk_detector.hpp"
#include "erosion/corpus_io.hpp"
#include "erosion/crypto_sim.hpp"

namespace erosion {

struct DetectionOptions {
    std::vector<double> alphas = {0.1, 0.25, 0.5, 0.75, 1.0};
    std::vector<ModeKind> modes = {ModeKind::Head, ModeKind::Dot, ModeKind::Hybrid};
    std::uint64_t block_size = kDefaultBlockSize;
    std::size_t chunk_len = kDefaultChunkLen;
    double theta_chunk = kDefaultThetaChunk;
    double grid_step = 0.01;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

/// File-level accuracy over the encrypted variants at one alpha (all modes)
/// plus every pristine test file.
struct AlphaScore {
    double alpha = 0.0;
    std::size_t correct = 0;
    std::size_t total = 0;
    [[nodiscard]] double accuracy() const noexcept { return total ? double(correct) / double(total) : 0.0; }
};

struct ModeAlphaScore {
    ModeKind mode = ModeKind::Head;
    double alpha = 0.0;
    std::size_t detected = 0;
    std::size_t total = 0;
};

/// Whole-file detector: encrypted iff D_KL(file || U) <= theta(family), with
/// theta fitted on pristine and fully encrypted validation files only.
struct EndpointBaseline {
    std::map<std::string, double> theta;
};

struct DetectionReport {
    FamilyThresholds thresholds;
    EndpointBaseline baseline;
    std::vector<AlphaScore> pipeline;           // parallel to options.alphas
    std::vector<AlphaScore> baseline_scores;    // parallel to options.alphas
    std::vector<ModeAlphaScore> per_mode;       // pipeline detections per (mode, alpha)
    std::size_t pristine_total = 0;
    std::size_t pristine_flagged = 0;
    std::size_t chunks_total = 0;               // encrypted test variants only
    std::size_t chunks_correct = 0;

    [[nodiscard]] double false_positive_rate() const noexcept {
        return pristine_total ? double(pristine_flagged) / double(pristine_total) : 0.0;
    }
};

/// Fits balanced-accuracy decision thresholds for score <= theta, per family:
/// candidates are midpoints between consecutive distinct scores plus both
/// ends; ties go to the smallest candidate.
[[nodiscard]] EndpointBaseline fit_endpoint_baseline(std::span<const std::string> families,
                                                     std::span<const double> scores, std::span<const int> truth);

/// Encrypts each validation and test file under every (mode, alpha), scores
/// chunks with the statistical classifier, calibrates t_file per family on
/// the validation split and the endpoint baseline on its alpha in {0, 1}
/// files, then scores both detectors on the test split.
[[nodiscard]] DetectionReport run_detection_experiment(std::span<const CorpusItem> validation,
                                                       std::span<const CorpusItem> test,
                                                       const DetectionOptions& options);

}  // namespace erosion
