#pragma once

#include <stdexcept>
#include <string>

namespace pfext {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed textual input (operator grammar, problem files).
struct ParseError : Error {
    using Error::Error;
};

// Input rejected on mathematical grounds: some singular point is irregular.
struct NonFuchsianInput : Error {
    using Error::Error;
};

// A numerical procedure could not reach its target accuracy or a geometric
// precondition failed.  The command-line driver maps these to one exit code.
struct NumericError : Error {
    using Error::Error;
};

struct AllCoefficientsZero : Error {
    AllCoefficientsZero() : Error("operator has no nonzero coefficients") {}
};

struct ZeroFunction : Error {
    ZeroFunction() : Error("rational function is identically zero") {}
};

// Indicial data requested at a point that is not regular singular.
struct IrregularPoint : NumericError {
    using NumericError::NumericError;
};

struct RootIsolationFailure : NumericError {
    using NumericError::NumericError;
};

struct PathTooCloseToSingularity : NumericError {
    using NumericError::NumericError;
};

struct PrecisionExhausted : NumericError {
    using NumericError::NumericError;
};

struct NoValidBasepoint : NumericError {
    using NumericError::NumericError;
};

// The frame used to read a cocycle out of a block monodromy is singular
// (e.g. the leading coefficient vanishes at the base point).
struct LiftFailure : NumericError {
    using NumericError::NumericError;
};

}  // namespace pfext
