#pragma once

#include <stdexcept>
#include <string>

namespace qgol {

// Exit-code families used by the command line front end:
// usage/config -> 1, numeric -> 2, acceptance-check -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    NumericError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

class UnsupportedWidthError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

} // namespace qgol
