#pragma once

#include <stdexcept>
#include <string>

namespace robust {

// Invalid parameters: bands, levels, flags.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Fewer observations than an operation needs.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Data length incompatible with a block/subsample layout.
class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Problem size beyond what a solver is allowed to allocate.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical configuration that cannot work (e.g. an unstable grid).
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedVariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace robust
