#pragma once

#include <stdexcept>
#include <string>

namespace sstopo {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter value lies outside a surface's or rectangle's valid range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Invalid user configuration (epsilon, delta, overlap ratio, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// Point cloud too small or collapsed to a single location.
class DegenerateCloudError : public Error {
public:
    using Error::Error;
};

/// Malformed surface, cloud or result file.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace sstopo
