#pragma once

#include <stdexcept>
#include <string>

namespace ruin {

// Base of everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed config files, inconsistent dimensions, invalid parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Mathematically valid input that the implemented formulas do not cover.
class DomainError : public Error {
public:
    using Error::Error;
};

class CriticalDrift : public DomainError {
public:
    using DomainError::DomainError;
};

class SingularResolvent : public DomainError {
public:
    using DomainError::DomainError;
};

class UnsupportedOrder : public DomainError {
public:
    using DomainError::DomainError;
};

class NegativeArgument : public DomainError {
public:
    using DomainError::DomainError;
};

class DimensionMismatch : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class MultipleRootDetected : public DomainError {
public:
    using DomainError::DomainError;
};

class ResidualTooLarge : public DomainError {
public:
    using DomainError::DomainError;
};

class NearCriticalRoot : public DomainError {
public:
    using DomainError::DomainError;
};

class BetaTooSmall : public DomainError {
public:
    using DomainError::DomainError;
};

class BetaNonpositive : public DomainError {
public:
    using DomainError::DomainError;
};

class NotExponentialClaims : public DomainError {
public:
    using DomainError::DomainError;
};

class InitialCapitalExcluded : public DomainError {
public:
    using DomainError::DomainError;
};

class InvalidStart : public DomainError {
public:
    using DomainError::DomainError;
};

class NoRuinObserved : public DomainError {
public:
    using DomainError::DomainError;
};

class IndexOutOfRange : public DomainError {
public:
    using DomainError::DomainError;
};

} // namespace ruin
