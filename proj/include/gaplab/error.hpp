#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaplab {

enum class ErrorKind {
    InvalidConfig,
    DimensionMismatch,
    OutOfRange,
    NumericalFailure,
    InsufficientData,
    TooLarge,
    InsufficientSpread,
    GapZero,
    Breakdown,
    MissingManifest,
    Io,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace gaplab
