#pragma once

#include <stdexcept>
#include <string>

namespace znd {

// Bad input or parameters outside the admissible set. CLI exit code 1.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Integrator, root finder or consistency check failed. CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace znd
