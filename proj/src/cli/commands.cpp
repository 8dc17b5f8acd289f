#include "erosion/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "erosion/atlas.hpp"
#include "erosion/chunk_detector.hpp"
#include "erosion/corpus_io.hpp"
#include "erosion/crypto_sim.hpp"
#include "erosion/error.hpp"
#include "erosion/hist_image.hpp"
#include "erosion/manifest.hpp"
#include "erosion/mixture_model.hpp"
#include "erosion/parallel.hpp"
#include "erosion/synth.hpp"
#include "erosion/tables.hpp"

namespace fs = std::filesystem;

namespace erosion::cli {

namespace {

const std::vector<std::string> kModeNames = {"head", "dot", "hybrid", "adaptive", "full"};

struct SynthConfig {
    fs::path out;
    std::vector<std::string> families;  // name=archetype
    std::size_t count = 20;
    std::uint64_t min_size = 1 << 20;
    std::uint64_t max_size = 1 << 20;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

struct EncryptConfig {
    fs::path in;
    fs::path out;
    fs::path manifest;
    std::string mode = "head";
    std::vector<double> alphas = alpha_range(0.1, 1.0, 0.1);
    std::uint64_t block_size = kDefaultBlockSize;
    std::uint64_t size_threshold = kDefaultSizeThreshold;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

struct AtlasConfig {
    fs::path in;
    fs::path table = "atlas.csv";
    fs::path trends = "trends.csv";
    std::string mode = "head";
    double alpha_step = 0.1;
    std::uint64_t block_size = kDefaultBlockSize;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

struct ModelConfig {
    fs::path in;
    std::optional<double> c_squared;
    double tau = 0.01;
    double alpha_step = 0.1;
    std::size_t replicates = 100;
    std::size_t subset = 200;
    std::string aggregation = "pooled";
    fs::path out;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

struct DetectConfig {
    std::vector<fs::path> in;
    fs::path manifest;
    fs::path verdicts;
    fs::path thresholds;
    fs::path out;
    double t_file = 0.5;
    double theta = kDefaultThetaChunk;
    double grid_step = 0.01;
    std::size_t chunk_len = kDefaultChunkLen;
    unsigned jobs = 1;
};

struct EncodeConfig {
    fs::path in;
    fs::path out;
    fs::path manifest;
    std::size_t chunk_len = kDefaultChunkLen;
    unsigned jobs = 1;
};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error(ErrorCode::IoFailure, "cannot create directory " + dir.string() +
                                              (ec ? ": " + ec.message() : std::string()));
    }
}

std::string key_of(const fs::path& p) {
    std::error_code ec;
    const fs::path c = fs::weakly_canonical(p, ec);
    return (ec ? p.lexically_normal() : c).generic_string();
}

std::vector<FileRecord> scan_nonempty(const fs::path& root, unsigned jobs, std::ostream& err) {
    auto scan = scan_corpus(root, FamilyRules::defaults(), jobs);
    for (const auto& e : scan.errors) err << "warning: skipping " << e.path.string() << ": " << e.message << '\n';
    std::vector<FileRecord> records;
    for (auto& r : scan.records) {
        if (r.size_bytes == 0) {
            err << "warning: skipping empty file " << r.path.string() << '\n';
            continue;
        }
        records.push_back(std::move(r));
    }
    return records;
}

/// Ground truth from an encryption manifest: output path -> plan.
std::map<std::string, EncryptionPlan> truth_index(const fs::path& manifest_path) {
    std::map<std::string, EncryptionPlan> index;
    if (manifest_path.empty()) return index;
    const auto manifest = read_manifest(manifest_path);
    for (const auto& r : manifest.records) index[key_of(r.output_path)] = r.plan;
    return index;
}

std::string alpha_label(double alpha) {
    return "alpha_" + format6(alpha);
}

int cmd_synth(const SynthConfig& c, std::ostream& out) {
    SynthSpec spec;
    for (const auto& entry : c.families) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::SpecInvalid, "expected NAME=ARCHETYPE, got '" + entry + "'");
        }
        FamilySpec f;
        f.family = entry.substr(0, eq);
        f.archetype = parse_archetype(entry.substr(eq + 1));
        f.count = c.count;
        f.min_size = c.min_size;
        f.max_size = c.max_size;
        spec.families.push_back(std::move(f));
    }
    const auto records = synth_corpus(spec, c.seed, c.out, c.jobs);
    out << "wrote " << records.size() << " files under " << c.out.string() << '\n';
    return kExitOk;
}

int cmd_encrypt(const EncryptConfig& c, std::ostream& out, std::ostream& err) {
    const auto records = scan_nonempty(c.in, c.jobs, err);
    if (records.empty()) {
        throw Error(ErrorCode::EmptyCorpus, "no readable files under " + c.in.string());
    }
    EncryptionMode base{parse_mode_kind(c.mode), c.alphas.front(), c.block_size, c.size_threshold};
    for (double a : c.alphas) {
        EncryptionMode m = base;
        m.fraction = a;
        validate(m);
    }

    const AesKey key = derive_key(c.seed);
    const std::string kid = key_id(key);
    NonceRegistry nonces;
    ExperimentManifest manifest;
    manifest.seed = c.seed;
    manifest.mode = base;
    manifest.alpha_grid = c.alphas;
    manifest.records.resize(c.alphas.size() * records.size());

    parallel_for(manifest.records.size(), c.jobs, [&](std::size_t slot) {
        const std::size_t k = slot / records.size();
        const std::size_t i = slot % records.size();
        const auto& src = records[i];
        const auto plaintext = read_file(src.path);
        EncryptionMode m = base;
        m.fraction = c.alphas[k];
        ManifestRecord& rec = manifest.records[slot];
        rec.source = src;
        rec.plan = plan(m, plaintext.size());
        rec.key_id = kid;
        rec.nonce = make_nonce(static_cast<std::uint32_t>(k), i);
        nonces.claim(rec.nonce);
        rec.output_path = c.out / alpha_label(c.alphas[k]) / src.path.lexically_relative(c.in);
        write_file(rec.output_path, apply(plaintext, rec.plan, key, rec.nonce));
    });

    const fs::path manifest_path =
        c.manifest.empty() ? fs::path(c.out.lexically_normal().string() + ".manifest.jsonl") : c.manifest;
    if (manifest_path.lexically_normal().string().ends_with("/.manifest.jsonl")) {
        throw Error(ErrorCode::InvalidArgument, "cannot derive a manifest path from --out; pass --manifest");
    }
    write_manifest(manifest, manifest_path);
    double mean_coverage = 0.0;
    for (const auto& r : manifest.records) mean_coverage += r.plan.achieved_coverage;
    mean_coverage /= static_cast<double>(manifest.records.size());
    out << "encrypted " << manifest.records.size() << " variants (" << records.size() << " files x "
        << c.alphas.size() << " alphas), mean coverage " << format6(mean_coverage) << '\n';
    out << "manifest " << manifest_path.string() << '\n';
    return kExitOk;
}

int cmd_atlas(const AtlasConfig& c, std::ostream& out, std::ostream& err) {
    const auto records = scan_nonempty(c.in, c.jobs, err);
    if (records.empty()) {
        throw Error(ErrorCode::EmptyCorpus, "no readable files under " + c.in.string());
    }
    AtlasOptions options;
    options.alpha_grid = alpha_range(0.0, 1.0, c.alpha_step);
    options.mode = EncryptionMode{parse_mode_kind(c.mode), 1.0, c.block_size, kDefaultSizeThreshold};
    options.seed = c.seed;
    options.jobs = c.jobs;
    const auto items = items_from_records(records);
    const auto atlas = compute_atlas(items, options);
    const auto trends = atlas_trends(atlas);
    emit_atlas_table(atlas.cells, c.table);
    emit_trend_table(trends, c.trends);

    for (const auto& t : trends) {
        if (t.statistic != "median" || (t.metric != Metric::Entropy && t.metric != Metric::Variance)) continue;
        char line[256];
        std::snprintf(line, sizeof line, "%-10s %-9s MK p=%.3g (%s)  Sen slope %.4g per step\n", t.family.c_str(),
                      std::string(to_string(t.metric)).c_str(), t.mann_kendall.p_value,
                      t.mann_kendall.alternative == TrendDirection::Increasing ? "up" : "down", t.sen.slope);
        out << line;
    }
    out << "atlas " << c.table.string() << ", trends " << c.trends.string() << '\n';
    return kExitOk;
}

void print_model_row(std::ostream& out, const std::string& label, double c2, double tau) {
    char line[256];
    std::snprintf(line, sizeof line, "%-10s c2=%.6g  alpha*(tau=%g)=%.5f\n", label.c_str(), c2, tau,
                  alpha_star(c2, tau));
    out << line;
}

void print_ceiling_curve(std::ostream& out, const std::string& label, double c2, double step) {
    for (double a : alpha_range(0.0, 1.0, step)) {
        out << "ceiling," << label << ',' << format6(a) << ',' << format6(ceiling(c2, a)) << '\n';
    }
}

int cmd_model(const ModelConfig& c, std::ostream& out, std::ostream& err) {
    if (c.in.empty() && !c.c_squared) {
        throw CLI::ValidationError("model", "pass --in DIR or --c-squared VALUE");
    }
    if (c.c_squared) {
        print_model_row(out, "input", *c.c_squared, c.tau);
        print_ceiling_curve(out, "input", *c.c_squared, c.alpha_step);
    }
    if (c.in.empty()) return kExitOk;

    const auto records = scan_nonempty(c.in, c.jobs, err);
    if (records.empty()) {
        throw Error(ErrorCode::EmptyCorpus, "no readable files under " + c.in.string());
    }
    std::vector<ByteHistogram> hists(records.size());
    parallel_for(records.size(), c.jobs, [&](std::size_t i) { hists[i] = histogram(read_file(records[i].path)); });
    std::map<std::string, std::vector<ByteHistogram>> by_family;
    for (std::size_t i = 0; i < records.size(); ++i) by_family[records[i].family].push_back(hists[i]);

    BootstrapOptions options;
    options.replicates = c.replicates;
    options.subset_size = c.subset;
    options.seed = c.seed;
    options.jobs = c.jobs;
    options.aggregation =
        c.aggregation == "mean" ? ReplicateAggregation::MeanOfFiles : ReplicateAggregation::PooledBytes;
    std::vector<FamilyConstant> constants;
    for (const auto& [family, family_hists] : by_family) {
        constants.push_back(estimate_family_constant(family_hists, family, options));
    }
    for (const auto& fc : constants) {
        if (fc.c_squared_median == 0.0) {
            err << "warning: " << fc.family << " is indistinguishable from uniform; no alpha*\n";
            continue;
        }
        print_model_row(out, fc.family, fc.c_squared_median, c.tau);
    }
    for (const auto& fc : constants) print_ceiling_curve(out, fc.family, fc.c_squared_median, c.alpha_step);
    if (!c.out.empty()) emit_family_constants(constants, c.out);
    return kExitOk;
}

struct ScannedFile {
    FileRecord record;
    fs::path root;
};

std::vector<ScannedFile> scan_roots(const std::vector<fs::path>& roots, unsigned jobs, std::ostream& err) {
    std::vector<ScannedFile> files;
    for (const auto& root : roots) {
        for (auto& r : scan_nonempty(root, jobs, err)) files.push_back({std::move(r), root});
    }
    if (files.empty()) {
        throw Error(ErrorCode::EmptyCorpus, "no readable files to scan");
    }
    return files;
}

/// Encrypted-chunk fraction and chunk count of every file, from the stat
/// classifier or from verdict files named <file_id>.verdicts.tsv.
std::vector<std::vector<ChunkVerdict>> chunk_verdicts(const std::vector<ScannedFile>& files, const DetectConfig& c) {
    std::vector<std::vector<ChunkVerdict>> verdicts(files.size());
    parallel_for(files.size(), c.jobs, [&](std::size_t i) {
        const auto bytes = read_file(files[i].record.path);
        if (c.verdicts.empty()) {
            verdicts[i] = classify_chunks_stat(bytes, c.theta, c.chunk_len);
            return;
        }
        const fs::path vfile = c.verdicts / (file_id(files[i].root, files[i].record.path) + ".verdicts.tsv");
        auto external = read_external_verdicts(vfile);
        const std::size_t expected = chunk_bounds(bytes.size(), c.chunk_len).size();
        if (external.size() != expected) {
            throw Error(ErrorCode::MalformedVerdictFile, vfile.string() + " covers " +
                                                             std::to_string(external.size()) + " chunks, file has " +
                                                             std::to_string(expected));
        }
        verdicts[i] = std::move(external);
    });
    return verdicts;
}

int file_truth(const std::map<std::string, EncryptionPlan>& truth, const fs::path& path) {
    const auto it = truth.find(key_of(path));
    return it != truth.end() && it->second.achieved_coverage > 0.0 ? 1 : 0;
}

int cmd_calibrate(const DetectConfig& c, std::ostream& out, std::ostream& err) {
    const auto files = scan_roots(c.in, c.jobs, err);
    const auto truth = truth_index(c.manifest);
    const auto verdicts = chunk_verdicts(files, c);
    std::vector<CalibrationSample> samples;
    for (std::size_t i = 0; i < files.size(); ++i) {
        samples.push_back({files[i].record.family, aggregate(verdicts[i], 0.0).encrypted_fraction,
                           file_truth(truth, files[i].record.path)});
    }
    const auto thresholds = calibrate_thresholds(samples, c.grid_step);
    write_thresholds(thresholds, c.out);
    for (const auto& [family, t] : thresholds.t_file) {
        out << family << " t_file=" << format6(t) << (thresholds.degenerate.count(family) ? " (degenerate)" : "")
            << '\n';
    }
    out << "thresholds " << c.out.string() << '\n';
    return kExitOk;
}

int cmd_scan(const DetectConfig& c, std::ostream& out, std::ostream& err) {
    const auto files = scan_roots(c.in, c.jobs, err);
    FamilyThresholds thresholds;
    const bool per_family = !c.thresholds.empty();
    if (per_family) thresholds = read_thresholds(c.thresholds);
    const auto truth = truth_index(c.manifest);
    const auto verdicts = chunk_verdicts(files, c);

    std::vector<VerdictRow> rows;
    std::size_t flagged = 0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        const auto& rec = files[i].record;
        VerdictRow row;
        row.path = rec.path.generic_string();
        row.family = rec.family;
        row.verdict = aggregate(verdicts[i], per_family ? thresholds.at(rec.family) : c.t_file);
        if (!c.manifest.empty()) {
            row.truth = file_truth(truth, rec.path);
            correct += *row.truth == row.verdict.label ? 1 : 0;
        }
        flagged += static_cast<std::size_t>(row.verdict.label);
        rows.push_back(std::move(row));
    }
    if (!c.out.empty()) emit_verdict_table(rows, c.out);
    out << "scanned " << rows.size() << " files, " << flagged << " labeled encrypted\n";
    if (!c.manifest.empty()) {
        out << "accuracy " << format6(static_cast<double>(correct) / static_cast<double>(rows.size())) << " ("
            << correct << "/" << rows.size() << ")\n";
    }
    return kExitOk;
}

int cmd_encode(const EncodeConfig& c, std::ostream& out, std::ostream& err) {
    const auto records = scan_nonempty(c.in, c.jobs, err);
    if (records.empty()) {
        throw Error(ErrorCode::EmptyCorpus, "no readable files under " + c.in.string());
    }
    const auto truth = truth_index(c.manifest);
    ensure_dir(c.out);

    struct Row {
        std::string id;
        std::size_t chunk;
        int label;
        std::string image;
    };
    std::vector<std::vector<Row>> rows(records.size());
    parallel_for(records.size(), c.jobs, [&](std::size_t i) {
        const auto bytes = read_file(records[i].path);
        const auto bounds = chunk_bounds(bytes.size(), c.chunk_len);
        std::vector<int> labels(bounds.size(), 0);
        if (const auto it = truth.find(key_of(records[i].path)); it != truth.end()) {
            if (it->second.file_length != bytes.size()) {
                throw Error(ErrorCode::LengthMismatch, records[i].path.string() + " does not match its manifest plan");
            }
            labels = chunk_truth(it->second, c.chunk_len);
        }
        const std::string id = file_id(c.in, records[i].path);
        ensure_dir(c.out / id);
        for (std::size_t k = 0; k < bounds.size(); ++k) {
            char name[64];
            std::snprintf(name, sizeof name, "chunk_%06zu_y%d.pgm", k, labels[k]);
            const auto span = std::span<const std::uint8_t>(bytes).subspan(bounds[k].offset, bounds[k].length);
            write_image(encode(histogram(span)), c.out / id / name);
            rows[i].push_back({id, k, labels[k], id + "/" + name});
        }
    });

    std::ofstream labels(c.out / "labels.tsv", std::ios::trunc);
    if (!labels) {
        throw Error(ErrorCode::IoFailure, "cannot write " + (c.out / "labels.tsv").string());
    }
    labels << "file_id\tchunk\tlabel\timage\n";
    std::size_t images = 0;
    for (const auto& file_rows : rows) {
        for (const auto& r : file_rows) {
            labels << r.id << '\t' << r.chunk << '\t' << r.label << '\t' << r.image << '\n';
            ++images;
        }
    }
    if (!labels) {
        throw Error(ErrorCode::IoFailure, "write failed for labels.tsv");
    }
    out << "wrote " << images << " images for " << records.size() << " files under " << c.out.string() << '\n';
    return kExitOk;
}

void add_jobs(CLI::App* sub, unsigned& jobs) {
    sub->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
}

void add_detect_options(CLI::App* sub, DetectConfig& c) {
    sub->add_option("--in", c.in, "Corpus directories (repeatable)")->required()->check(CLI::ExistingDirectory);
    sub->add_option("--manifest", c.manifest, "Encryption manifest giving ground truth")->check(CLI::ExistingFile);
    sub->add_option("--verdicts", c.verdicts, "Directory of <file_id>.verdicts.tsv files")
        ->check(CLI::ExistingDirectory);
    sub->add_option("--theta", c.theta, "KL threshold (bits) of the statistical chunk classifier")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--chunk-len", c.chunk_len, "Chunk length in bytes")
        ->check(CLI::Range(kMinChunkLen, std::size_t{1} << 30));
    add_jobs(sub, c.jobs);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Intermittent-encryption measurement, modeling and detection toolkit", "erosion"};
    app.require_subcommand(1);

    SynthConfig synth;
    auto* s = app.add_subcommand("synth", "Generate a synthetic corpus");
    s->add_option("--out", synth.out, "Output directory")->required();
    s->add_option("--family", synth.families, "NAME=ARCHETYPE with ARCHETYPE text|structured|precompressed")
        ->required();
    s->add_option("--count", synth.count, "Files per family")->check(CLI::PositiveNumber);
    s->add_option("--min-size", synth.min_size, "Smallest file size in bytes")->check(CLI::PositiveNumber);
    s->add_option("--max-size", synth.max_size, "Largest file size in bytes")->check(CLI::PositiveNumber);
    s->add_option("--seed", synth.seed);
    add_jobs(s, synth.jobs);

    EncryptConfig enc;
    auto* e = app.add_subcommand("encrypt", "Apply an intermittent-encryption mode across a corpus");
    e->add_option("--in", enc.in, "Corpus directory")->required()->check(CLI::ExistingDirectory);
    e->add_option("--out", enc.out, "Output directory")->required();
    e->add_option("--manifest", enc.manifest, "Manifest path (default <out>.manifest.jsonl)");
    e->add_option("--mode", enc.mode)->transform(CLI::IsMember(kModeNames, CLI::ignore_case));
    e->add_option("--alpha", enc.alphas, "Coverage values (repeatable)")->check(CLI::Range(0.0, 1.0));
    e->add_option("--block-size", enc.block_size)->check(CLI::PositiveNumber);
    e->add_option("--size-threshold", enc.size_threshold, "Adaptive mode: full encryption up to this size");
    e->add_option("--seed", enc.seed);
    add_jobs(e, enc.jobs);

    AtlasConfig atl;
    auto* a = app.add_subcommand("atlas", "Byte-statistics atlas over an alpha grid with trend tests");
    a->add_option("--in", atl.in, "Corpus directory")->required()->check(CLI::ExistingDirectory);
    a->add_option("--table", atl.table, "Quantile table (CSV)");
    a->add_option("--trends", atl.trends, "Trend table (CSV)");
    a->add_option("--mode", atl.mode)->transform(CLI::IsMember(kModeNames, CLI::ignore_case));
    a->add_option("--alpha-step", atl.alpha_step)->check(CLI::Range(1e-6, 1.0));
    a->add_option("--block-size", atl.block_size)->check(CLI::PositiveNumber);
    a->add_option("--seed", atl.seed);
    add_jobs(a, atl.jobs);

    ModelConfig mdl;
    auto* m = app.add_subcommand("model", "Family constants, detectability ceilings and alpha*");
    m->add_option("--in", mdl.in, "Cleartext corpus directory")->check(CLI::ExistingDirectory);
    m->add_option("--c-squared", mdl.c_squared, "Use this family constant directly")->check(CLI::NonNegativeNumber);
    m->add_option("--tau", mdl.tau, "KL detection threshold in bits")->check(CLI::PositiveNumber);
    m->add_option("--alpha-step", mdl.alpha_step)->check(CLI::Range(1e-6, 1.0));
    m->add_option("--replicates", mdl.replicates)->check(CLI::PositiveNumber);
    m->add_option("--subset", mdl.subset)->check(CLI::PositiveNumber);
    m->add_option("--aggregation", mdl.aggregation)->check(CLI::IsMember({"pooled", "mean"}));
    m->add_option("--out", mdl.out, "Family-constant table (CSV)");
    m->add_option("--seed", mdl.seed);
    add_jobs(m, mdl.jobs);

    DetectConfig cal;
    auto* c = app.add_subcommand("calibrate", "Choose per-family t_file on a labeled validation corpus");
    add_detect_options(c, cal);
    c->add_option("--out", cal.out, "Threshold table (CSV)")->required();
    c->add_option("--grid-step", cal.grid_step)->check(CLI::Range(1e-6, 1.0));

    DetectConfig scn;
    auto* sc = app.add_subcommand("scan", "Chunk, classify and label files");
    add_detect_options(sc, scn);
    sc->add_option("--thresholds", scn.thresholds, "Per-family thresholds from calibrate")
        ->check(CLI::ExistingFile);
    sc->add_option("--t-file", scn.t_file, "Single threshold for every family")->check(CLI::Range(0.0, 1.0));
    sc->add_option("--out", scn.out, "Verdict table (CSV)");

    EncodeConfig ecd;
    auto* en = app.add_subcommand("encode", "Write 16x16 histogram images of every chunk");
    en->add_option("--in", ecd.in, "Corpus directory")->required()->check(CLI::ExistingDirectory);
    en->add_option("--out", ecd.out, "Dataset directory")->required();
    en->add_option("--manifest", ecd.manifest, "Encryption manifest for chunk labels")->check(CLI::ExistingFile);
    en->add_option("--chunk-len", ecd.chunk_len)->check(CLI::Range(kMinChunkLen, std::size_t{1} << 30));
    add_jobs(en, ecd.jobs);

    try {
        app.parse(argc, argv);
        if (synth.min_size > synth.max_size) {
            throw CLI::ValidationError("--min-size", "must not exceed --max-size");
        }
        if (enc.alphas.empty()) {
            throw CLI::ValidationError("--alpha", "needs at least one value");
        }
        if (s->parsed()) return cmd_synth(synth, out);
        if (e->parsed()) return cmd_encrypt(enc, out, err);
        if (a->parsed()) return cmd_atlas(atl, out, err);
        if (m->parsed()) return cmd_model(mdl, out, err);
        if (c->parsed()) return cmd_calibrate(cal, out, err);
        if (sc->parsed()) return cmd_scan(scn, out, err);
        if (en->parsed()) return cmd_encode(ecd, out, err);
    } catch (const CLI::ParseError& pe) {
        const int code = app.exit(pe, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace erosion::cli
