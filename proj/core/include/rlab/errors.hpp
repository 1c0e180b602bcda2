#pragma once

#include <stdexcept>
#include <string>

namespace rlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// bad parameters or violated preconditions
class DomainError : public Error {
public:
    using Error::Error;
};

class NotApplicable : public DomainError {
public:
    using DomainError::DomainError;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class ConstructionError : public Error {
public:
    using Error::Error;
};

class VariantMismatch : public Error {
public:
    using Error::Error;
};

class IncompleteSpectrum : public Error {
public:
    using Error::Error;
};

class PrecisionError : public Error {
public:
    using Error::Error;
};

class UnresolvedCluster : public PrecisionError {
public:
    using PrecisionError::PrecisionError;
};

// a count or sum was requested outside the region a resonance set covers
class CoverageError : public DomainError {
public:
    using DomainError::DomainError;
};

// the resonance box is too small for the requested tail budget
class InsufficientBox : public PrecisionError {
public:
    InsufficientBox(const std::string& what, double required_im_max)
        : PrecisionError(what), required_im_max(required_im_max) {}
    double required_im_max;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace rlab
