#pragma once

#include <stdexcept>
#include <string>

namespace swarmsim {

/// Caller broke a documented precondition (empty input, bad arity, ...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Coincident or collinear robots where an algorithm needs a proper polygon.
class DegenerateConfiguration : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown algorithm id.
class RegistryError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

}  // namespace swarmsim
