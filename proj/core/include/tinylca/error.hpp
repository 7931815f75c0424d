#pragma once

#include <stdexcept>
#include <string>

namespace tinylca {

/// Root of every exception thrown by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Conversion or arithmetic between quantities of different dimensions.
class UnitError : public Error {
public:
    using Error::Error;
};

/// A value violates a type invariant or an operation precondition.
class ValueError : public Error {
public:
    using Error::Error;
};

/// A named profile, reference, or sector does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

}  // namespace tinylca
