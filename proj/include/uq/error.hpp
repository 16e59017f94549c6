#pragma once

#include <stdexcept>
#include <string>

namespace uq {

// Error taxonomy shared by every module. The CLI maps DataValidation-class
// codes to exit 3 and Internal to exit 4.
enum class ErrorCode {
    NonRectangular,
    NegativeEntry,
    RowSumOutOfTolerance,
    LabelOutOfRange,
    EmptyCalibration,
    ClassCountMismatch,
    CorruptRecord,
    VersionMismatch,
    EmptyStack,
    NegativeEvidence,
    BoundaryPoint,
    InvalidAlpha,
    InvalidOneHot,
    InvalidConfig,
    LengthMismatch,
    InsufficientPool,
    ValueOutOfRange,
    AlignmentMismatch,
    IoFailure,
    Internal,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace uq
