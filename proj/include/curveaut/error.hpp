#pragma once

#include <stdexcept>
#include <string>

namespace curveaut {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Mixing elements or matrices over different cyclotomic fields.
struct FieldMismatchError : Error {
    using Error::Error;
};

/// Inverting zero, or inverting/canonicalizing a singular matrix.
struct SingularError : Error {
    using Error::Error;
};

/// Closure exceeded the configured element bound.
struct OrderBoundError : Error {
    using Error::Error;
};

/// Matrix does not have the required block shape.
struct ShapeError : Error {
    using Error::Error;
};

/// Quotient by a subgroup that is not normal.
struct NotNormalError : Error {
    using Error::Error;
};

/// Unknown catalog name, bad parameter, malformed input.
struct BadArgumentError : Error {
    using Error::Error;
};

/// Requested conductor exceeds the configured cap.
struct ConductorCapError : Error {
    using Error::Error;
};

} // namespace curveaut
