#pragma once

#include <stdexcept>
#include <string>

namespace aptfs {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input data violated a documented precondition or file-format rule.
class DataError : public Error {
public:
    using Error::Error;
};

/// A configuration value is out of its valid range.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace aptfs
