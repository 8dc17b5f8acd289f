#include "erosion/tables.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "erosion/error.hpp"

namespace erosion {

std::string format6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

class TableWriter {
public:
    TableWriter(const std::filesystem::path& path, std::string_view header) : path_(path), out_(path, std::ios::trunc) {
        if (!out_) {
            throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
        }
        out_ << kTableVersionLine << '\n' << header << '\n';
    }

    template <typename... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((out_ << (first ? "" : ",") << fields, first = false), ...);
        out_ << '\n';
    }

    void finish() {
        out_.flush();
        if (!out_) {
            throw Error(ErrorCode::IoFailure, "write failed for " + path_.string());
        }
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

}  // namespace

void emit_atlas_table(std::span<const AtlasCell> cells, const std::filesystem::path& path) {
    if (cells.empty()) {
        throw Error(ErrorCode::EmptyInput, "no atlas cells to emit");
    }
    std::vector<AtlasCell> sorted(cells.begin(), cells.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const AtlasCell& a, const AtlasCell& b) {
        if (a.family != b.family) return a.family < b.family;
        if (a.metric != b.metric) return to_string(a.metric) < to_string(b.metric);
        return a.alpha < b.alpha;
    });
    TableWriter t(path, "family,alpha,metric,q10,q25,q50,q75,q90");
    for (const auto& c : sorted) {
        t.row(csv_field(c.family), format6(c.alpha), to_string(c.metric), format6(c.band.q10), format6(c.band.q25),
              format6(c.band.q50), format6(c.band.q75), format6(c.band.q90));
    }
    t.finish();
}

void emit_trend_table(std::span<const TrendRow> rows, const std::filesystem::path& path) {
    TableWriter t(path, "family,metric,statistic,direction,s,var_s,z,p_value,sen_slope,sen_ci_low,sen_ci_high");
    for (const auto& r : rows) {
        t.row(csv_field(r.family), to_string(r.metric), r.statistic, to_string(r.mann_kendall.alternative),
              r.mann_kendall.s_statistic, format6(r.mann_kendall.variance_s), format6(r.mann_kendall.z_score),
              format6(r.mann_kendall.p_value), format6(r.sen.slope), format6(r.sen.ci_low), format6(r.sen.ci_high));
    }
    t.finish();
}

void emit_family_constants(std::span<const FamilyConstant> constants, const std::filesystem::path& path) {
    TableWriter t(path, "family,c_squared,ci_low,ci_high,replicates,subset_size");
    for (const auto& c : constants) {
        t.row(csv_field(c.family), format6(c.c_squared_median), format6(c.ci_low), format6(c.ci_high), c.replicates,
              c.subset_size);
    }
    t.finish();
}

void emit_verdict_table(std::span<const VerdictRow> rows, const std::filesystem::path& path) {
    TableWriter t(path, "path,family,chunks,encrypted_fraction,t_file,label,truth");
    for (const auto& r : rows) {
        t.row(csv_field(r.path), csv_field(r.family), r.verdict.chunk_count, format6(r.verdict.encrypted_fraction),
              format6(r.verdict.threshold), r.verdict.label, r.truth ? std::to_string(*r.truth) : std::string());
    }
    t.finish();
}

void write_thresholds(const FamilyThresholds& thresholds, const std::filesystem::path& path) {
    TableWriter t(path, "family,t_file,metric,degenerate");
    for (const auto& [family, value] : thresholds.t_file) {
        // Thresholds are read back, so they keep full precision.
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        t.row(csv_field(family), buf, thresholds.calibration_metric, thresholds.degenerate.count(family) ? 1 : 0);
    }
    t.finish();
}

FamilyThresholds read_thresholds(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != kTableVersionLine) {
        throw Error(ErrorCode::SchemaMismatch, path.string() + ": missing or unsupported table version line");
    }
    if (!std::getline(in, line) || line != "family,t_file,metric,degenerate") {
        throw Error(ErrorCode::MalformedLine, path.string() + ": unexpected header");
    }
    FamilyThresholds out;
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (fields.size() != 4) {
            throw Error(ErrorCode::MalformedLine, where + ": expected 4 fields");
        }
        char* end = nullptr;
        const double t = std::strtod(fields[1].c_str(), &end);
        if (fields[1].empty() || *end != '\0' || !(t >= 0.0 && t <= 1.0)) {
            throw Error(ErrorCode::MalformedLine, where + ": bad threshold '" + fields[1] + "'");
        }
        if (fields[3] != "0" && fields[3] != "1") {
            throw Error(ErrorCode::MalformedLine, where + ": degenerate flag must be 0 or 1");
        }
        out.t_file[fields[0]] = t;
        out.calibration_metric = fields[2];
        if (fields[3] == "1") out.degenerate.insert(fields[0]);
    }
    return out;
}

}  // namespace erosion
