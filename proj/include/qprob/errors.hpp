#pragma once

#include <stdexcept>
#include <string>

namespace qprob {

// Base class for all toolkit errors so callers can catch in one place.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimMismatch : Error {
    using Error::Error;
};

struct NotHermitian : Error {
    NotHermitian(const std::string& what, double deviation)
        : Error(what), deviation(deviation) {}
    double deviation;
};

struct NumericalIntegrity : Error {
    using Error::Error;
};

struct ConditionOnNull : Error {
    using Error::Error;
};

struct UnknownVariable : Error {
    using Error::Error;
};

struct OutcomeNotInSpectrum : Error {
    using Error::Error;
};

struct ZeroProbabilityBranch : Error {
    using Error::Error;
};

struct DegenerateSpectrum : Error {
    using Error::Error;
};

struct IncompatibleFamily : Error {
    IncompatibleFamily(const std::string& what, std::size_t first, std::size_t second,
                       double commutator_norm)
        : Error(what), first(first), second(second), commutator_norm(commutator_norm) {}
    std::size_t first;
    std::size_t second;
    double commutator_norm;
};

struct OutcomeMismatch : Error {
    using Error::Error;
};

struct StepTooLarge : Error {
    using Error::Error;
};

struct NoStationaryConvergence : Error {
    using Error::Error;
};

struct NoDecay : Error {
    using Error::Error;
};

struct EmptyRecord : Error {
    using Error::Error;
};

struct DegenerateRecord : Error {
    using Error::Error;
};

struct ConfigInvalid : Error {
    using Error::Error;
};

}  // namespace qprob
