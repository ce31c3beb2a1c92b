#pragma once

#include <stdexcept>
#include <string>

namespace lapreg {

/// Failure categories surfaced by the library. The CLI maps these onto
/// process exit codes: input validation -> 2, model/config -> 3,
/// numerical failure -> 4.
enum class ErrorCode {
    NotSymmetric,
    RowSumNonZero,
    OffDiagonalOutOfBox,
    EntryOutOfBox,
    DimensionMismatch,
    BadInput,
    SingularDesign,
    LocalNeedsScalarPredictor,
    ZeroVariance,
    AllBandwidthsFailed,
    DegenerateFit,
    BadConfig,
    NoConvergence,
    NegativeEigenvalue,
    BandwidthTooSmall,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace lapreg
