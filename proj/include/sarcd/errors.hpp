#pragma once

#include <stdexcept>
#include <string>

namespace sarcd {

// Base for everything thrown by the library. Argument/contract violations use
// std::invalid_argument instead so callers can tell "bad call" from "bad data".
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FileNotFoundError : public IoError {
public:
    using IoError::IoError;
};

class MalformedHeaderError : public IoError {
public:
    using IoError::IoError;
};

class TruncatedPayloadError : public IoError {
public:
    using IoError::IoError;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

// Data-dependent degeneracies: single-valued histograms, empty classes,
// zero-mean regions, kappa on a single-class reference, and the like.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

} // namespace sarcd
