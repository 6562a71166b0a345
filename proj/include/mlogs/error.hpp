#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace mlogs {

/// Machine-readable failure categories shared by every module and surfaced
/// verbatim by the HTTP API and the CLI.
enum class ErrorCode {
    // LAS parsing / writing
    UnsupportedVersion,
    MissingSection,
    ColumnMismatch,
    MalformedHeaderLine,
    MalformedValue,
    InvalidFile,
    // dataset model
    NonMonotoneDepth,
    DuplicateDepth,
    EmptyDataset,
    UnknownCurve,
    NameCollision,
    InvalidName,
    InvalidRange,
    AllMissing,
    TooFewValues,
    LengthMismatch,
    // charts and selections
    MinimumTwo,
    TooManyCurves,
    WellMismatch,
    EdgeMismatch,
    IndexOutOfRange,
    // modelling
    UnknownColumn,
    ConstantFeature,
    NoCompleteRows,
    TooFewRows,
    SingularSystem,
    NonBinaryTarget,
    MissingFeatureCurve,
    EmptyEvaluation,
    // service
    UnknownProject,
    UnknownWell,
    UnknownSelection,
    UnknownModel,
    NothingToUndo,
    PayloadTooLarge,
    MalformedCsv,
    InvalidArgument,
    IoError,
};

[[nodiscard]] std::string_view code_name(ErrorCode code) noexcept;

/// Where an error happened: a 1-based line in the source text, a curve or
/// column name, or both.
struct ErrorLocation {
    std::optional<std::size_t> line;
    std::string curve;
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, ErrorLocation location = {})
        : std::runtime_error(message), code_(code), location_(std::move(location)) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const ErrorLocation& location() const noexcept { return location_; }

private:
    ErrorCode code_;
    ErrorLocation location_;
};

[[noreturn]] inline void fail_at_line(ErrorCode code, std::size_t line, const std::string& message) {
    throw Error(code, message, ErrorLocation{line, {}});
}

[[noreturn]] inline void fail_on_curve(ErrorCode code, const std::string& curve, const std::string& message) {
    throw Error(code, message, ErrorLocation{std::nullopt, curve});
}

}  // namespace mlogs
