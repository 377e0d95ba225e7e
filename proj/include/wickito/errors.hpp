#pragma once

#include <stdexcept>
#include <string>

namespace wickito {

// Caller supplied an invalid argument (bad preset, malformed index, n <= 0, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not reach the requested accuracy.
class AccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sampling grid cannot resolve the spectrum of the input.
class ResolutionError : public AccuracyError {
public:
    using AccuracyError::AccuracyError;
};

// Evaluation point where the quantity is not defined (e.g. r' at 0 for rough fBm).
class DomainError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

// Time outside a precomputed coefficient table.
class RangeError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

// Realization vector shorter than the support of a chaos vector.
class DimensionError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

// A series that does not converge for the requested parameters.
class DivergenceError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

// Result of a chaos operation would exceed the global truncation caps,
// or an arithmetic result (e.g. alpha!) is not representable.
class TruncationOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

}  // namespace wickito
