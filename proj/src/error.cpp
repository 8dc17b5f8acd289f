#include "erosion/error.hpp"

namespace erosion {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::SupportMismatch: return "SupportMismatch";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
        case ErrorCode::EmptyCorpus: return "EmptyCorpus";
        case ErrorCode::DegenerateFamily: return "DegenerateFamily";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NonceReuse: return "NonceReuse";
        case ErrorCode::CryptoFailure: return "CryptoFailure";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::MalformedImage: return "MalformedImage";
        case ErrorCode::EmptyFile: return "EmptyFile";
        case ErrorCode::ChunkLenTooSmall: return "ChunkLenTooSmall";
        case ErrorCode::ChunkTooSmall: return "ChunkTooSmall";
        case ErrorCode::MalformedVerdictFile: return "MalformedVerdictFile";
        case ErrorCode::IndexGap: return "IndexGap";
        case ErrorCode::NoVerdicts: return "NoVerdicts";
        case ErrorCode::EmptyFamily: return "EmptyFamily";
        case ErrorCode::UnknownFamily: return "UnknownFamily";
        case ErrorCode::UnreadableRoot: return "UnreadableRoot";
        case ErrorCode::SpecInvalid: return "SpecInvalid";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::MalformedLine: return "MalformedLine";
        case ErrorCode::ManifestInvalid: return "ManifestInvalid";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace erosion
