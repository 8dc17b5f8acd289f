#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace erosion {

enum class ErrorCode {
    InvalidArgument,
    EmptyInput,
    SupportMismatch,
    SeriesTooShort,
    AlphaOutOfRange,
    EmptyCorpus,
    DegenerateFamily,
    LengthMismatch,
    NonceReuse,
    CryptoFailure,
    IoFailure,
    MalformedImage,
    EmptyFile,
    ChunkLenTooSmall,
    ChunkTooSmall,
    MalformedVerdictFile,
    IndexGap,
    NoVerdicts,
    EmptyFamily,
    UnknownFamily,
    UnreadableRoot,
    SpecInvalid,
    SchemaMismatch,
    MalformedLine,
    ManifestInvalid,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

// Every failure surfaced by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace erosion
