#pragma once

#include <stdexcept>
#include <string>

namespace uedge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition on an argument failed (empty grid, n < 2, bad dimension...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A cumulant, moment or polynomial of the requested order is not available.
class UnsupportedOrder : public Error {
public:
    using Error::Error;
};

/// A covariance matrix could not be used for standardization
/// (singular, not symmetric, or cumulants not standardized).
class StandardizationError : public Error {
public:
    using Error::Error;
};

/// Operation only defined for a specific dimension.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// The studentized functional was evaluated where x2 <= x1^2.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written; message carries the path.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace uedge
