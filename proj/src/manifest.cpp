#include "erosion/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "erosion/error.hpp"
#include "erosion/hex.hpp"

namespace erosion {

using nlohmann::json;

namespace {

json mode_to_json(const EncryptionMode& m) {
    return {{"variant", std::string(to_string(m.variant))},
            {"fraction", m.fraction},
            {"block_size", m.block_size},
            {"size_threshold", m.size_threshold}};
}

EncryptionMode mode_from_json(const json& j) {
    EncryptionMode m;
    m.variant = parse_mode_kind(j.at("variant").get<std::string>());
    m.fraction = j.at("fraction").get<double>();
    m.block_size = j.at("block_size").get<std::uint64_t>();
    m.size_threshold = j.at("size_threshold").get<std::uint64_t>();
    return m;
}

template <std::size_t N>
std::array<std::uint8_t, N> fixed_from_hex(const std::string& hex) {
    const auto bytes = from_hex(hex);
    if (bytes.size() != N) {
        throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(N) + " hex bytes");
    }
    std::array<std::uint8_t, N> out{};
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return out;
}

json record_to_json(const ManifestRecord& r) {
    json ranges = json::array();
    for (const auto& range : r.plan.ranges) ranges.push_back({range.offset, range.length});
    return {{"schema_version", kManifestSchemaVersion},
            {"kind", "record"},
            {"source",
             {{"path", r.source.path.generic_string()},
              {"family", r.source.family},
              {"size_bytes", r.source.size_bytes},
              {"sha256", to_hex(r.source.content_digest)}}},
            {"plan",
             {{"file_length", r.plan.file_length},
              {"achieved_coverage", r.plan.achieved_coverage},
              {"mode", mode_to_json(r.plan.mode)},
              {"ranges", ranges}}},
            {"key_id", r.key_id},
            {"nonce", to_hex(r.nonce)},
            {"output_path", r.output_path.generic_string()}};
}

ManifestRecord record_from_json(const json& j) {
    ManifestRecord r;
    const auto& src = j.at("source");
    r.source.path = src.at("path").get<std::string>();
    r.source.family = src.at("family").get<std::string>();
    r.source.size_bytes = src.at("size_bytes").get<std::uint64_t>();
    r.source.content_digest = fixed_from_hex<32>(src.at("sha256").get<std::string>());
    const auto& plan = j.at("plan");
    r.plan.file_length = plan.at("file_length").get<std::uint64_t>();
    r.plan.achieved_coverage = plan.at("achieved_coverage").get<double>();
    r.plan.mode = mode_from_json(plan.at("mode"));
    for (const auto& range : plan.at("ranges")) {
        r.plan.ranges.push_back({range.at(0).get<std::uint64_t>(), range.at(1).get<std::uint64_t>()});
    }
    r.key_id = j.at("key_id").get<std::string>();
    r.nonce = fixed_from_hex<12>(j.at("nonce").get<std::string>());
    r.output_path = j.at("output_path").get<std::string>();
    return r;
}

}  // namespace

void validate(const ExperimentManifest& manifest) {
    std::set<GcmNonce> nonces;
    std::set<std::string> outputs;
    for (const auto& r : manifest.records) {
        if (!nonces.insert(r.nonce).second) {
            throw Error(ErrorCode::ManifestInvalid, "nonce " + to_hex(r.nonce) + " used twice");
        }
        if (!outputs.insert(r.output_path.lexically_normal().generic_string()).second) {
            throw Error(ErrorCode::ManifestInvalid, "output path " + r.output_path.string() + " used twice");
        }
    }
}

void write_manifest(const ExperimentManifest& manifest, const std::filesystem::path& path) {
    validate(manifest);
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    }
    const json header = {{"schema_version", kManifestSchemaVersion},
                         {"kind", "header"},
                         {"seed", manifest.seed},
                         {"mode", mode_to_json(manifest.mode)},
                         {"alpha_grid", manifest.alpha_grid}};
    out << header.dump() << '\n';
    for (const auto& r : manifest.records) out << record_to_json(r).dump() << '\n';
    if (!out) {
        throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
    }
}

ExperimentManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    ExperimentManifest manifest;
    bool have_header = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw Error(ErrorCode::MalformedLine, where + ": not a JSON object");
        }
        if (!j.contains("schema_version")) {
            throw Error(ErrorCode::SchemaMismatch, where + ": missing schema_version");
        }
        if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kManifestSchemaVersion) {
            throw Error(ErrorCode::SchemaMismatch, where + ": unsupported schema_version " +
                                                       j["schema_version"].dump());
        }
        try {
            const auto kind = j.at("kind").get<std::string>();
            if (kind == "header") {
                if (have_header) throw Error(ErrorCode::MalformedLine, where + ": second header");
                manifest.seed = j.at("seed").get<std::uint64_t>();
                manifest.mode = mode_from_json(j.at("mode"));
                manifest.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();
                have_header = true;
            } else if (kind == "record") {
                if (!have_header) throw Error(ErrorCode::MalformedLine, where + ": record before header");
                manifest.records.push_back(record_from_json(j));
            } else {
                throw Error(ErrorCode::MalformedLine, where + ": unknown kind '" + kind + "'");
            }
        } catch (const json::exception& e) {
            throw Error(ErrorCode::MalformedLine, where + ": " + e.what());
        } catch (const Error& e) {
            if (e.code() == ErrorCode::MalformedLine) throw;
            throw Error(ErrorCode::MalformedLine, where + ": " + e.what());
        }
    }
    if (!have_header) {
        throw Error(ErrorCode::MalformedLine, path.string() + ": no header line");
    }
    validate(manifest);
    return manifest;
}

}  // namespace erosion
