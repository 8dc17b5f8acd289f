#include "erosion/corpus_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <iterator>
#include <optional>

#include "erosion/error.hpp"
#include "erosion/parallel.hpp"

namespace fs = std::filesystem;

namespace erosion {

FamilyRules FamilyRules::defaults() {
    FamilyRules rules;
    rules.by_extension = {
        {"bmp", "bmp"},   {"png", "png"},   {"txt", "txt"},  {"text", "txt"}, {"csv", "txt"},
        {"log", "txt"},   {"doc", "doc"},   {"docx", "docx"}, {"pdf", "pdf"}, {"ppt", "ppt"},
        {"xls", "xls"},   {"jpg", "jpg"},   {"jpeg", "jpg"}, {"mp3", "mp3"},  {"mp4", "mp4"},
        {"m4v", "mp4"},
    };
    return rules;
}

namespace {

bool starts_with(std::span<const std::uint8_t> head, std::initializer_list<std::uint8_t> magic) {
    if (head.size() < magic.size()) return false;
    return std::equal(magic.begin(), magic.end(), head.begin());
}

std::optional<std::string> sniff(std::span<const std::uint8_t> head) {
    if (starts_with(head, {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A})) return "png";
    if (starts_with(head, {0xFF, 0xD8, 0xFF})) return "jpg";
    if (starts_with(head, {'%', 'P', 'D', 'F'})) return "pdf";
    // Office Open XML documents are ZIP containers.
    if (starts_with(head, {'P', 'K', 0x03, 0x04})) return "docx";
    return std::nullopt;
}

}  // namespace

std::string label_family(const fs::path& path, std::span<const std::uint8_t> head, const FamilyRules& rules) {
    std::string ext = path.extension().string();
    if (!ext.empty()) {
        ext.erase(0, 1);
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (const auto it = rules.by_extension.find(ext); it != rules.by_extension.end()) {
            return it->second;
        }
    }
    return sniff(head).value_or(std::string(kUnknownFamily));
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw Error(ErrorCode::IoFailure, "read failed for " + path.string());
    }
    return bytes;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw Error(ErrorCode::IoFailure, "cannot create " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
    }
}

CorpusScan scan_corpus(const fs::path& root, const FamilyRules& rules, unsigned jobs) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        throw Error(ErrorCode::UnreadableRoot, root.string() + " is not a readable directory");
    }
    std::vector<fs::path> paths;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) {
        throw Error(ErrorCode::UnreadableRoot, root.string() + ": " + ec.message());
    }
    for (const auto& entry : it) {
        if (entry.is_regular_file(ec)) paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());

    std::vector<std::optional<FileRecord>> slots(paths.size());
    std::vector<std::string> failures(paths.size());
    parallel_for(paths.size(), jobs, [&](std::size_t i) {
        try {
            const auto bytes = read_file(paths[i]);
            FileRecord rec;
            rec.path = paths[i];
            rec.size_bytes = bytes.size();
            rec.content_digest = sha256(std::span<const std::uint8_t>(bytes));
            rec.family = label_family(paths[i], std::span(bytes).first(std::min<std::size_t>(bytes.size(), 16)),
                                      rules);
            slots[i] = std::move(rec);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });

    CorpusScan scan;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (slots[i]) {
            scan.records.push_back(std::move(*slots[i]));
        } else {
            scan.errors.push_back({paths[i], failures[i]});
        }
    }
    return scan;
}

std::vector<CorpusItem> items_from_records(std::span<const FileRecord> records) {
    std::vector<CorpusItem> items;
    items.reserve(records.size());
    for (const auto& r : records) {
        items.push_back({r.family, r.path.string(), [path = r.path] { return read_file(path); }});
    }
    return items;
}

std::string file_id(const fs::path& root, const fs::path& file) {
    std::string rel = file.lexically_relative(root).generic_string();
    if (rel.empty() || rel.starts_with("..")) rel = file.filename().generic_string();
    std::string id;
    for (char c : rel) {
        if (c == '/') {
            id += "__";
        } else {
            id += c;
        }
    }
    return id;
}

}  // namespace erosion
