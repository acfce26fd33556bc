#pragma once

#include <stdexcept>
#include <string>

namespace geoc {

// Categories map onto CLI exit codes: input 2, numerical 3, resource 4.
enum class ErrorKind { input = 2, numerical = 3, resource = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Malformed files, bad arguments, shape mismatches.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

/// Non-convergence, divergence, non-finite intermediate values.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

/// A configured memory ceiling would be exceeded.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error(ErrorKind::resource, what) {}
};

}  // namespace geoc
