#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netepi {

enum class ErrorCode {
    // dsl
    Diagnostics,
    InvalidMerge,
    // population data
    EmptyFile,
    MalformedRow,
    UnknownIndividual,
    NonPositiveTimestep,
    // grounding
    UnknownSeedIndividual,
    EmptyPopulation,
    // engine
    OutOfRange,
    TooLarge,
    ZeroRuns,
    // reporting
    EmptyInput,
    DimensionMismatch,
    EmptySeries,
    // shared
    InvalidArgument,
    IoFailure,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace netepi
