#pragma once

#include <stdexcept>
#include <string>

namespace sperner {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Raised when an operation needs 0 < p_j < 1 for every coordinate.
class TrivialMeasure : public Error {
public:
    TrivialMeasure(int coordinate, double value);

    int coordinate() const noexcept { return coordinate_; }

private:
    int coordinate_;
};

class NotAntichain : public Error {
public:
    using Error::Error;
};

class InsufficientTrials : public Error {
public:
    using Error::Error;
};

/// A proven inequality failed numerically. Indicates a bug, never a result.
class TheoremViolation : public Error {
public:
    using Error::Error;
};

} // namespace sperner
