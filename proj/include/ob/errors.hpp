#pragma once

#include <stdexcept>
#include <string>

namespace ob {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : Error {
    using Error::Error;
};

// spectral
struct SingularSymbolOnMeanMode : Error {
    using Error::Error;
};

// besov
struct BlockOutOfRange : Error {
    using Error::Error;
};
struct NormDivergent : Error {
    using Error::Error;
};
struct EmptySequence : Error {
    using Error::Error;
};

// linmodes
struct NonPositiveFrequency : Error {
    using Error::Error;
};
struct NegativeHSquare : Error {
    using Error::Error;
};
struct NoAdmissibleConstants : Error {
    using Error::Error;
};
struct NotCurlFree : Error {
    using Error::Error;
};

// solvers
struct VacuumApproached : Error {
    using Error::Error;
};
struct CflViolation : Error {
    using Error::Error;
};
struct IncompatibleScale : Error {
    using Error::Error;
};

// harness
struct TimeGridMismatch : Error {
    using Error::Error;
};
struct DegenerateFit : Error {
    using Error::Error;
};
struct IoFailure : Error {
    using Error::Error;
};

}  // namespace ob
