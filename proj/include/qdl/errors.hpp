#pragma once

#include <stdexcept>
#include <string>

namespace qdl {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameter or point outside the admissible domain (q <= 0, r outside (0,4], x outside [0,1], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Quantity undefined at the requested point, e.g. the Schwarzian at the turning point.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class ResourceLimitError : public Error {
public:
    using Error::Error;
};

// Malformed sweep / bifurcation descriptor or an operation applied to the wrong grid kind.
class SpecError : public Error {
public:
    using Error::Error;
};

} // namespace qdl
