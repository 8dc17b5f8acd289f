#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <catch_amalgamated.hpp>

#include "erosion/chunk_detector.hpp"
#include "erosion/cli.hpp"
#include "erosion/corpus_io.hpp"
#include "erosion/hist_image.hpp"
#include "erosion/manifest.hpp"
#include "erosion/tables.hpp"

namespace fs = std::filesystem;
using erosion::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::initializer_list<std::string> args) {
    std::vector<std::string> storage = {"erosion"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path workspace() {
    static const fs::path dir = [] {
        const auto d = fs::temp_directory_path() / "erosion_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::size_t count_lines(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    return n;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"bogus"}).code == 2);
    CHECK(invoke({"model", "--c-squared", "0.1", "--tau", "0"}).code == 2);
    CHECK(invoke({"model", "--c-squared", "0.1", "--tau", "-1"}).code == 2);
    CHECK(invoke({"encrypt", "--out", "x"}).code == 2);
    CHECK(invoke({"encrypt", "--in", "/nonexistent", "--out", "x"}).code == 2);
    CHECK(invoke({"encrypt", "--in", workspace().string(), "--out", "x", "--alpha", "1.5"}).code == 2);
    CHECK(invoke({"encrypt", "--in", workspace().string(), "--out", "x", "--mode", "smart"}).code == 2);
    CHECK(invoke({"scan", "--in", workspace().string(), "--chunk-len", "100"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("model prints alpha star for a given constant") {
    const auto r = invoke({"model", "--c-squared", "0.179274", "--tau", "0.01", "--alpha-step", "0.5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("alpha*(tau=0.01)=0.98771") != std::string::npos);
    CHECK(r.out.find("ceiling,") != std::string::npos);
    CHECK(invoke({"model", "--tau", "0.01"}).code != 0);
}

TEST_CASE("synth, encrypt, calibrate, scan and encode round trip") {
    const auto ws = workspace();
    const auto corpus = ws / "corpus";
    auto r = invoke({"synth", "--out", corpus.string(), "--family", "xls=structured", "--family", "txt=text",
                     "--count", "3", "--min-size", "30000", "--max-size", "40000", "--seed", "4"});
    REQUIRE(r.code == 0);
    CHECK(erosion::scan_corpus(corpus).records.size() == 6);

    const auto enc = ws / "enc";
    r = invoke({"encrypt", "--in", corpus.string(), "--out", enc.string(), "--mode", "Head", "--alpha", "0.5",
                "--alpha", "1.0", "--seed", "9"});
    REQUIRE(r.code == 0);
    const auto manifest_path = fs::path(enc.string() + ".manifest.jsonl");
    const auto manifest = erosion::read_manifest(manifest_path);
    CHECK(manifest.records.size() == 12);
    CHECK(fs::exists(enc / "alpha_0.5" / "xls" / "xls_0000.xls"));
    CHECK(fs::exists(enc / "alpha_1" / "txt" / "txt_0002.txt"));

    // Rerunning with the same seed reproduces the manifest.
    const auto enc2 = ws / "enc2";
    REQUIRE(invoke({"encrypt", "--in", corpus.string(), "--out", enc2.string(), "--mode", "head", "--alpha", "0.5",
                    "--alpha", "1.0", "--seed", "9"})
                .code == 0);
    const auto again = erosion::read_manifest(fs::path(enc2.string() + ".manifest.jsonl"));
    for (std::size_t i = 0; i < manifest.records.size(); ++i) CHECK(again.records[i].nonce == manifest.records[i].nonce);

    const auto thresholds = ws / "thresholds.csv";
    r = invoke({"calibrate", "--in", corpus.string(), "--in", (enc / "alpha_0.5").string(), "--in",
                (enc / "alpha_1").string(), "--manifest", manifest_path.string(), "--out", thresholds.string()});
    REQUIRE(r.code == 0);
    const auto th = erosion::read_thresholds(thresholds);
    CHECK(th.t_file.size() == 2);

    const auto verdicts = ws / "verdicts.csv";
    r = invoke({"scan", "--in", corpus.string(), "--in", (enc / "alpha_1").string(), "--manifest",
                manifest_path.string(), "--thresholds", thresholds.string(), "--out", verdicts.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("accuracy 1 (12/12)") != std::string::npos);
    CHECK(count_lines(verdicts) == 2 + 12);

    const auto dataset = ws / "dataset";
    r = invoke({"encode", "--in", (enc / "alpha_0.5").string(), "--out", dataset.string(), "--manifest",
                manifest_path.string()});
    REQUIRE(r.code == 0);
    std::ifstream labels(dataset / "labels.tsv");
    std::string header;
    std::getline(labels, header);
    CHECK(header == "file_id\tchunk\tlabel\timage");
    std::size_t rows = 0, positives = 0;
    for (std::string line; std::getline(labels, line); ++rows) {
        std::istringstream fields(line);
        std::string id, chunk, label, image;
        std::getline(fields, id, '\t');
        std::getline(fields, chunk, '\t');
        std::getline(fields, label, '\t');
        std::getline(fields, image, '\t');
        positives += label == "1";
        CHECK(image.find("_y" + label + ".pgm") != std::string::npos);
        CHECK_NOTHROW(erosion::read_image(dataset / image));
    }
    CHECK(rows >= 6 * 3);
    CHECK(positives > 0);
    CHECK(positives < rows);
}

TEST_CASE("external verdict files drive scan") {
    const auto ws = workspace() / "external";
    const auto corpus = ws / "corpus";
    REQUIRE(invoke({"synth", "--out", corpus.string(), "--family", "doc=text", "--count", "1", "--min-size", "25000",
                    "--max-size", "25000"})
                .code == 0);
    const auto vdir = ws / "verdicts";
    fs::create_directories(vdir);
    const auto vfile = vdir / "doc__doc_0000.doc.verdicts.tsv";

    std::ofstream(vfile) << "0\t1\t0.01\n1\t1\t0.02\n2\t0\t3.0\n";
    auto r = invoke({"scan", "--in", corpus.string(), "--verdicts", vdir.string(), "--t-file", "0.5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("1 labeled encrypted") != std::string::npos);

    std::ofstream(vfile) << "0\t1\t0.01\n2\t0\t3.0\n";
    r = invoke({"scan", "--in", corpus.string(), "--verdicts", vdir.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("error:") != std::string::npos);

    std::ofstream(vfile) << "0\t1\t0.01\n1\t1\t0.02\n";
    CHECK(invoke({"scan", "--in", corpus.string(), "--verdicts", vdir.string()}).code == 1);

    fs::remove(vfile);
    CHECK(invoke({"scan", "--in", corpus.string(), "--verdicts", vdir.string()}).code == 1);
}

TEST_CASE("empty corpora are runtime failures") {
    const auto empty = workspace() / "empty";
    fs::create_directories(empty);
    const auto r = invoke({"atlas", "--in", empty.string(), "--table", (empty / "a.csv").string()});
    CHECK(r.code == 1);
}
