#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vpal {

// Base class for every domain error this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An operation was called outside its stated domain.
struct PreconditionViolated : Error {
    using Error::Error;
};

// A factorization ran out of budget, so a verdict inside a scanned range
// could not be decided. Carries the offending integer in decimal.
struct UnknownVerdict : Error {
    std::string offending;
    UnknownVerdict(std::string offending_n, const std::string& what)
        : Error(what), offending(std::move(offending_n)) {}
};

// An ascending scan hit its ceiling before finding a member.
struct SearchCapExceeded : Error {
    using Error::Error;
};

// No shift-period fits the computed window; the caller must raise the window.
struct NoPeriodFound : Error {
    using Error::Error;
};

// Series values do not depend only on gcd(k, omega), so the candidate
// period cannot be decomposed over the divisor lattice.
struct GcdInconsistency : Error {
    using Error::Error;
};

// The decomposition failed to reproduce the series it was derived from.
struct ReconstructionMismatch : Error {
    using Error::Error;
};

// A periodicity-predicted member failed verification; the candidate period
// was wrong on the computed window.
struct WitnessVerificationFailed : Error {
    using Error::Error;
};

// Two routes that must agree disagreed. Indicates a bug, not bad input.
struct InternalInconsistency : Error {
    using Error::Error;
};

// Malformed input file. Carries the 1-based line number.
struct ParseError : Error {
    std::size_t line;
    ParseError(std::size_t line_number, const std::string& what)
        : Error(what), line(line_number) {}
};

}  // namespace vpal
