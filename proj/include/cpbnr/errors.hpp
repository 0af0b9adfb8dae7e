// errors.hpp -- exception taxonomy shared by all cpbnr components.
#pragma once

#include <stdexcept>
#include <string>

namespace cpbnr {

// Base class so callers can catch everything from this library at once.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A constructed object violates one of its documented invariants.
struct ValidationError : Error {
    using Error::Error;
};

// Config text could not be parsed (unknown key, bad number, bad syntax).
struct ParseError : Error {
    using Error::Error;
};

// A physical expression left its domain (e.g. negative radicand in the
// coupling law); indicates corrupted parameters rather than user input.
struct DomainError : Error {
    using Error::Error;
};

// Requested Fock truncation drops more tail probability than allowed.
struct TruncationError : Error {
    using Error::Error;
};

// An operation that divides by the state norm met a zero-norm state.
struct DegenerateStateError : Error {
    using Error::Error;
};

// Non-finite amplitudes appeared during propagation or evaluation.
struct NumericsError : Error {
    using Error::Error;
};

// Probability climbed into the top ladder pair mid-run, so the truncated
// ladder stopped being a faithful model of the untruncated one.
struct TruncationOverflowError : Error {
    using Error::Error;
};

// Dense reference machinery asked for a matrix beyond its size guard.
struct DimensionError : Error {
    using Error::Error;
};

// Reference propagator failed to reach its self-consistency target.
struct ConvergenceError : Error {
    using Error::Error;
};

} // namespace cpbnr
