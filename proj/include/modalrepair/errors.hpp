#pragma once

#include <stdexcept>
#include <string>

namespace modalrepair {

/// Shapes or indices that do not conform (fold, unfold, mode out of range, ...).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller supplied an argument outside its documented domain.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// NaN/Inf where finite data is required, divergence, undefined quantities.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File format and filesystem problems.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace modalrepair
