#include "uq/error.hpp"

namespace uq {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonRectangular: return "NonRectangular";
        case ErrorCode::NegativeEntry: return "NegativeEntry";
        case ErrorCode::RowSumOutOfTolerance: return "RowSumOutOfTolerance";
        case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorCode::EmptyCalibration: return "EmptyCalibration";
        case ErrorCode::ClassCountMismatch: return "ClassCountMismatch";
        case ErrorCode::CorruptRecord: return "CorruptRecord";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::EmptyStack: return "EmptyStack";
        case ErrorCode::NegativeEvidence: return "NegativeEvidence";
        case ErrorCode::BoundaryPoint: return "BoundaryPoint";
        case ErrorCode::InvalidAlpha: return "InvalidAlpha";
        case ErrorCode::InvalidOneHot: return "InvalidOneHot";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::InsufficientPool: return "InsufficientPool";
        case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
        case ErrorCode::AlignmentMismatch: return "AlignmentMismatch";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace uq
