#include "erosion/hist_image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "erosion/error.hpp"

namespace erosion {

namespace {

// Reads one whitespace-delimited PNM header token, skipping '#' comments.
std::string next_token(const std::vector<char>& data, std::size_t& pos) {
    while (pos < data.size()) {
        const auto c = static_cast<unsigned char>(data[pos]);
        if (c == '#') {
            while (pos < data.size() && data[pos] != '\n') ++pos;
        } else if (std::isspace(c)) {
            ++pos;
        } else {
            break;
        }
    }
    std::string tok;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) {
        tok.push_back(data[pos++]);
    }
    return tok;
}

long parse_header_number(const std::string& tok, const std::filesystem::path& path) {
    if (tok.empty() || tok.size() > 9 || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw Error(ErrorCode::MalformedImage, path.string() + ": bad header field '" + tok + "'");
    }
    return std::stol(tok);
}

}  // namespace

HistImage encode(const ByteHistogram& hist) noexcept {
    HistImage img;
    img.source_total = hist.total;
    const std::uint64_t max_count = hist.total == 0 ? 1 : hist.max_count();
    for (std::size_t b = 0; b < kByteValues; ++b) {
        // floor((255 c + max/2) / max) computed exactly in integers.
        const std::uint64_t num = 2 * 255 * hist.counts[b] + max_count;
        img.pixels[b] = static_cast<std::uint8_t>(num / (2 * max_count));
    }
    return img;
}

void write_image(const HistImage& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    }
    out << "P5\n" << kImageSide << ' ' << kImageSide << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
    if (!out) {
        throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
    }
}

HistImage read_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    const std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t pos = 0;
    if (next_token(data, pos) != "P5") {
        throw Error(ErrorCode::MalformedImage, path.string() + ": not a binary PGM");
    }
    const long width = parse_header_number(next_token(data, pos), path);
    const long height = parse_header_number(next_token(data, pos), path);
    const long maxval = parse_header_number(next_token(data, pos), path);
    if (width != static_cast<long>(kImageSide) || height != static_cast<long>(kImageSide)) {
        throw Error(ErrorCode::MalformedImage, path.string() + ": expected 16x16, got " + std::to_string(width) +
                                                   "x" + std::to_string(height));
    }
    if (maxval != 255) {
        throw Error(ErrorCode::MalformedImage, path.string() + ": expected maxval 255");
    }
    // Exactly one whitespace byte separates maxval from the raster.
    if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos]))) {
        throw Error(ErrorCode::MalformedImage, path.string() + ": truncated header");
    }
    ++pos;
    HistImage img;
    if (data.size() - pos != img.pixels.size()) {
        throw Error(ErrorCode::MalformedImage, path.string() + ": raster has " + std::to_string(data.size() - pos) +
                                                   " bytes, expected 256");
    }
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        img.pixels[i] = static_cast<std::uint8_t>(data[pos + i]);
    }
    return img;
}

}  // namespace erosion
