#include "mlogs/error.hpp"

namespace mlogs {

std::string_view code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
        case ErrorCode::MissingSection: return "MissingSection";
        case ErrorCode::ColumnMismatch: return "ColumnMismatch";
        case ErrorCode::MalformedHeaderLine: return "MalformedHeaderLine";
        case ErrorCode::MalformedValue: return "MalformedValue";
        case ErrorCode::InvalidFile: return "InvalidFile";
        case ErrorCode::NonMonotoneDepth: return "NonMonotoneDepth";
        case ErrorCode::DuplicateDepth: return "DuplicateDepth";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::UnknownCurve: return "UnknownCurve";
        case ErrorCode::NameCollision: return "NameCollision";
        case ErrorCode::InvalidName: return "InvalidName";
        case ErrorCode::InvalidRange: return "InvalidRange";
        case ErrorCode::AllMissing: return "AllMissing";
        case ErrorCode::TooFewValues: return "TooFewValues";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::MinimumTwo: return "MinimumTwo";
        case ErrorCode::TooManyCurves: return "TooManyCurves";
        case ErrorCode::WellMismatch: return "WellMismatch";
        case ErrorCode::EdgeMismatch: return "EdgeMismatch";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::UnknownColumn: return "UnknownColumn";
        case ErrorCode::ConstantFeature: return "ConstantFeature";
        case ErrorCode::NoCompleteRows: return "NoCompleteRows";
        case ErrorCode::TooFewRows: return "TooFewRows";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::NonBinaryTarget: return "NonBinaryTarget";
        case ErrorCode::MissingFeatureCurve: return "MissingFeatureCurve";
        case ErrorCode::EmptyEvaluation: return "EmptyEvaluation";
        case ErrorCode::UnknownProject: return "UnknownProject";
        case ErrorCode::UnknownWell: return "UnknownWell";
        case ErrorCode::UnknownSelection: return "UnknownSelection";
        case ErrorCode::UnknownModel: return "UnknownModel";
        case ErrorCode::NothingToUndo: return "NothingToUndo";
        case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
        case ErrorCode::MalformedCsv: return "MalformedCsv";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace mlogs
