#pragma once

#include <stdexcept>
#include <string>

namespace ramlock {

// Base class for all library errors. CLI maps InputError -> exit 2,
// everything else -> exit 1.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InputError : Error {
    using Error::Error;
};

// localfield
struct NotEisenstein : InputError {
    using InputError::InputError;
};
struct PrecisionTooLow : Error {
    using Error::Error;
};
struct PrecisionLoss : Error {
    using Error::Error;
};
struct NotInTower : InputError {
    using InputError::InputError;
};
struct Reducible : Error {
    using Error::Error;
};
struct UnsupportedPresentation : Error {
    using Error::Error;
};

// witt
struct ContextMismatch : InputError {
    using InputError::InputError;
};
struct NotDivisible : Error {
    using Error::Error;
};
struct MissingRoots : InputError {
    using InputError::InputError;
};

// ramification
struct RangeError : InputError {
    using InputError::InputError;
};
struct TooLarge : Error {
    using Error::Error;
};

// phimodule
struct BadExponent : InputError {
    using InputError::InputError;
};
struct BadShape : InputError {
    using InputError::InputError;
};
struct BudgetExceeded : Error {
    using Error::Error;
};
struct PrecisionInsufficient : Error {
    using Error::Error;
};
struct NotFound : Error {
    using Error::Error;
};
struct NotAnAutomorphism : InputError {
    using InputError::InputError;
};

}  // namespace ramlock
