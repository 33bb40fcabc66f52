#include "netepi/error.hpp"

namespace netepi {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::Diagnostics: return "Diagnostics";
    case ErrorCode::InvalidMerge: return "InvalidMerge";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownIndividual: return "UnknownIndividual";
    case ErrorCode::NonPositiveTimestep: return "NonPositiveTimestep";
    case ErrorCode::UnknownSeedIndividual: return "UnknownSeedIndividual";
    case ErrorCode::EmptyPopulation: return "EmptyPopulation";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ZeroRuns: return "ZeroRuns";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

} // namespace netepi
