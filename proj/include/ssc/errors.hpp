#pragma once

#include <stdexcept>
#include <string>

namespace ssc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// geometry
class DegeneratePoint : public Error {
public:
    using Error::Error;
};
class PredicateFailure : public Error {
public:
    using Error::Error;
};
class DegenerateSimplex : public Error {
public:
    using Error::Error;
};
class PointLocationFailure : public Error {
public:
    using Error::Error;
};

// surrogate
class InsufficientPoints : public Error {
public:
    using Error::Error;
};
class MoreThanTwoRegions : public Error {
public:
    using Error::Error;
};

// adaptive
class PlacementFailure : public Error {
public:
    using Error::Error;
};
class BudgetExhausted : public Error {
public:
    using Error::Error;
};
class OracleFailure : public Error {
public:
    using Error::Error;
};

// testbed
class SolveFailure : public OracleFailure {
public:
    using OracleFailure::OracleFailure;
};
class InfeasibleNetwork : public OracleFailure {
public:
    using OracleFailure::OracleFailure;
};

// configuration and file formats
class ConfigError : public Error {
public:
    using Error::Error;
};
class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

} // namespace ssc
