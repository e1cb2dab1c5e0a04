#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kclose {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape or parameter outside the admissible domain (grid size, p < 1, lambda <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An operation's input contract was violated (non-real input, phi < 1, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Pointwise division hit a zero sample.
class SingularityError : public Error {
public:
    SingularityError(std::size_t index, const std::string& what)
        : Error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// A module product was attempted on non-members, or its result left the module.
/// For non-members the two residuals are those of the multiplier and of f.
class ModuleStructureError : public Error {
public:
    ModuleStructureError(double input_residual, double output_residual, const std::string& what)
        : Error(what), input_residual_(input_residual), output_residual_(output_residual) {}

    double input_residual() const noexcept { return input_residual_; }
    double output_residual() const noexcept { return output_residual_; }

private:
    double input_residual_;
    double output_residual_;
};

/// Malformed configuration or file.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace kclose
