#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xa {

// Input violates a documented precondition or type invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Parameters are well-formed but unusable for the requested analysis.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Formula requested outside the parameter regime where it holds.
class UnsupportedRegimeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An operation produced no samples; carries how many aging windows were lost.
class EmptySampleError : public std::runtime_error {
public:
    EmptySampleError(const std::string& what, std::size_t n_discarded)
        : std::runtime_error(what), n_discarded_(n_discarded) {}

    [[nodiscard]] std::size_t n_discarded() const noexcept { return n_discarded_; }

private:
    std::size_t n_discarded_;
};

}  // namespace xa
