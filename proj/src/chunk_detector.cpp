#include "erosion/chunk_detector.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "erosion/byte_stats.hpp"
#include "erosion/error.hpp"

namespace erosion {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return fields;
}

[[noreturn]] void malformed(const std::filesystem::path& path, std::size_t line_no, const std::string& why) {
    throw Error(ErrorCode::MalformedVerdictFile, path.string() + ":" + std::to_string(line_no) + ": " + why);
}

}  // namespace

double FamilyThresholds::at(std::string_view family) const {
    const auto it = t_file.find(std::string(family));
    if (it == t_file.end()) {
        throw Error(ErrorCode::UnknownFamily, "no threshold for family '" + std::string(family) + "'");
    }
    return it->second;
}

std::vector<ByteRange> chunk_bounds(std::uint64_t n, std::size_t chunk_len) {
    if (chunk_len < kMinChunkLen) {
        throw Error(ErrorCode::ChunkLenTooSmall, "chunk length must be >= 256, got " + std::to_string(chunk_len));
    }
    if (n == 0) {
        throw Error(ErrorCode::EmptyFile, "cannot chunk an empty file");
    }
    std::vector<ByteRange> bounds;
    for (std::uint64_t start = 0; start < n; start += chunk_len) {
        bounds.push_back({start, std::min<std::uint64_t>(chunk_len, n - start)});
    }
    if (bounds.size() > 1 && bounds.back().length < kMinChunkLen) {
        const std::uint64_t tail = bounds.back().length;
        bounds.pop_back();
        bounds.back().length += tail;
    }
    return bounds;
}

std::vector<std::span<const std::uint8_t>> chunk(std::span<const std::uint8_t> file_bytes, std::size_t chunk_len) {
    std::vector<std::span<const std::uint8_t>> chunks;
    for (const auto& r : chunk_bounds(file_bytes.size(), chunk_len)) {
        chunks.push_back(file_bytes.subspan(r.offset, r.length));
    }
    return chunks;
}

ChunkVerdict classify_chunk_stat(std::span<const std::uint8_t> chunk_bytes, double theta_chunk, std::uint64_t index) {
    if (chunk_bytes.size() < kMinChunkLen) {
        throw Error(ErrorCode::ChunkTooSmall, "chunk of " + std::to_string(chunk_bytes.size()) + " bytes");
    }
    ChunkVerdict v;
    v.index = index;
    v.score = kl_divergence_bits(normalize(histogram(chunk_bytes)), ByteDistribution::uniform(), 0.0);
    v.label = v.score <= theta_chunk ? 1 : 0;
    return v;
}

std::vector<ChunkVerdict> classify_chunks_stat(std::span<const std::uint8_t> file_bytes, double theta_chunk,
                                               std::size_t chunk_len) {
    const auto chunks = chunk(file_bytes, chunk_len);
    std::vector<ChunkVerdict> verdicts;
    verdicts.reserve(chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        verdicts.push_back(classify_chunk_stat(chunks[i], theta_chunk, i));
    }
    return verdicts;
}

std::vector<ChunkVerdict> read_external_verdicts(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open verdict file " + path.string());
    }
    std::vector<ChunkVerdict> verdicts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 3) {
            malformed(path, line_no, "expected 3 tab-separated fields");
        }
        ChunkVerdict v;
        const auto& idx = fields[0];
        const auto [iend, iec] = std::from_chars(idx.data(), idx.data() + idx.size(), v.index);
        if (iec != std::errc() || iend != idx.data() + idx.size()) {
            malformed(path, line_no, "bad index '" + idx + "'");
        }
        if (fields[1] == "0") {
            v.label = 0;
        } else if (fields[1] == "1") {
            v.label = 1;
        } else {
            malformed(path, line_no, "label must be 0 or 1, got '" + fields[1] + "'");
        }
        char* end = nullptr;
        v.score = std::strtod(fields[2].c_str(), &end);
        if (fields[2].empty() || end != fields[2].c_str() + fields[2].size() || !std::isfinite(v.score)) {
            malformed(path, line_no, "bad score '" + fields[2] + "'");
        }
        verdicts.push_back(v);
    }
    std::sort(verdicts.begin(), verdicts.end(),
              [](const ChunkVerdict& a, const ChunkVerdict& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (i > 0 && verdicts[i].index == verdicts[i - 1].index) {
            throw Error(ErrorCode::MalformedVerdictFile,
                        path.string() + ": duplicate chunk index " + std::to_string(verdicts[i].index));
        }
    }
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (verdicts[i].index != i) {
            throw Error(ErrorCode::IndexGap, path.string() + ": chunk index " + std::to_string(i) + " missing");
        }
    }
    return verdicts;
}

void write_verdicts(const std::filesystem::path& path, std::span<const ChunkVerdict> verdicts) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    }
    std::vector<ChunkVerdict> sorted(verdicts.begin(), verdicts.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
    char buf[64];
    for (const auto& v : sorted) {
        std::snprintf(buf, sizeof buf, "%.9g", v.score);
        out << v.index << '\t' << v.label << '\t' << buf << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
    }
}

FileVerdict aggregate(std::span<const ChunkVerdict> verdicts, double t_file) {
    if (verdicts.empty()) {
        throw Error(ErrorCode::NoVerdicts, "no chunk verdicts to aggregate");
    }
    if (!(t_file >= 0.0 && t_file <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "t_file must lie in [0, 1]");
    }
    std::size_t positives = 0;
    for (const auto& v : verdicts) {
        if (v.label != 0 && v.label != 1) {
            throw Error(ErrorCode::InvalidArgument, "chunk label outside {0, 1}");
        }
        positives += static_cast<std::size_t>(v.label);
    }
    FileVerdict fv;
    fv.chunk_count = verdicts.size();
    fv.encrypted_fraction = static_cast<double>(positives) / static_cast<double>(verdicts.size());
    fv.threshold = t_file;
    fv.label = fv.encrypted_fraction >= t_file ? 1 : 0;
    return fv;
}

std::string_view to_string(CalibrationObjective objective) noexcept {
    return objective == CalibrationObjective::BalancedAccuracy ? "balanced_accuracy" : "accuracy";
}

std::vector<double> threshold_grid(double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "grid step must lie in (0, 1]");
    }
    std::vector<double> grid;
    const double steps = std::round(1.0 / grid_step);
    if (std::abs(steps * grid_step - 1.0) < 1e-9) {
        // k / n is correctly rounded, so 0.25 on a 0.01 grid is exactly 0.25.
        const auto n = static_cast<std::size_t>(steps);
        for (std::size_t k = 0; k <= n; ++k) grid.push_back(static_cast<double>(k) / steps);
    } else {
        for (std::size_t k = 0; static_cast<double>(k) * grid_step <= 1.0; ++k) {
            grid.push_back(static_cast<double>(k) * grid_step);
        }
        if (grid.back() < 1.0) grid.push_back(1.0);
    }
    return grid;
}

FamilyThresholds calibrate_thresholds(std::span<const CalibrationSample> validation, double grid_step,
                                      CalibrationObjective objective) {
    if (validation.empty()) {
        throw Error(ErrorCode::EmptyFamily, "empty validation set");
    }
    const auto grid = threshold_grid(grid_step);
    std::map<std::string, std::vector<const CalibrationSample*>> by_family;
    for (const auto& s : validation) {
        if (s.truth != 0 && s.truth != 1) {
            throw Error(ErrorCode::InvalidArgument, "ground-truth label outside {0, 1}");
        }
        by_family[s.family].push_back(&s);
    }

    FamilyThresholds out;
    out.calibration_metric = std::string(to_string(objective));
    for (const auto& [family, samples] : by_family) {
        std::size_t pos = 0;
        for (const auto* s : samples) pos += static_cast<std::size_t>(s->truth);
        const std::size_t neg = samples.size() - pos;

        double best = -1.0;
        double worst = 2.0;
        double best_t = grid.front();
        for (double t : grid) {
            std::size_t tp = 0;
            std::size_t tn = 0;
            for (const auto* s : samples) {
                const bool flagged = s->encrypted_fraction >= t;
                if (s->truth == 1 && flagged) ++tp;
                if (s->truth == 0 && !flagged) ++tn;
            }
            double score = 0.0;
            if (objective == CalibrationObjective::Accuracy) {
                score = static_cast<double>(tp + tn) / static_cast<double>(samples.size());
            } else {
                double rates = 0.0;
                int classes = 0;
                if (pos > 0) rates += static_cast<double>(tp) / static_cast<double>(pos), ++classes;
                if (neg > 0) rates += static_cast<double>(tn) / static_cast<double>(neg), ++classes;
                score = rates / classes;
            }
            if (score > best) {
                best = score;
                best_t = t;
            }
            worst = std::min(worst, score);
        }
        out.t_file[family] = best_t;
        if (best == worst) {
            out.degenerate.insert(family);
        }
    }
    return out;
}

FileVerdict scan_file(std::span<const std::uint8_t> file_bytes, std::string_view family,
                      const FamilyThresholds& thresholds, const ChunkClassifier& classifier, std::size_t chunk_len) {
    const double t_file = thresholds.at(family);
    if (const auto* stat = std::get_if<StatChunkClassifier>(&classifier)) {
        const auto verdicts = classify_chunks_stat(file_bytes, stat->theta, chunk_len);
        return aggregate(verdicts, t_file);
    }
    const auto& external = std::get<ExternalChunkVerdicts>(classifier).verdicts;
    const std::size_t expected = chunk_bounds(file_bytes.size(), chunk_len).size();
    if (external.size() != expected) {
        throw Error(ErrorCode::MalformedVerdictFile, "verdicts cover " + std::to_string(external.size()) +
                                                         " chunks, file has " + std::to_string(expected));
    }
    return aggregate(external, t_file);
}

std::vector<int> chunk_truth(const EncryptionPlan& plan, std::size_t chunk_len) {
    std::vector<int> truth;
    for (const auto& r : chunk_bounds(plan.file_length, chunk_len)) {
        const std::uint64_t inside = encrypted_overlap(plan, r.offset, r.length);
        truth.push_back(2 * inside >= r.length ? 1 : 0);
    }
    return truth;
}

}  // namespace erosion
