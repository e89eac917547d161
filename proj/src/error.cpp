#include "gaplab/error.hpp"

namespace gaplab {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::NumericalFailure: return "NumericalFailure";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::InsufficientSpread: return "InsufficientSpread";
        case ErrorKind::GapZero: return "GapZero";
        case ErrorKind::Breakdown: return "Breakdown";
        case ErrorKind::MissingManifest: return "MissingManifest";
        case ErrorKind::Io: return "Io";
    }
    return "Error";
}

}  // namespace gaplab
