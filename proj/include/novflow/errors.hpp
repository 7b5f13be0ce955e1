#pragma once

#include <stdexcept>
#include <string>

namespace novflow {

/// Bad input or violated precondition (CLI exit code 2).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure could not reach its target (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace novflow
