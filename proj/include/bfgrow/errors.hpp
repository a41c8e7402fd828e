// Exception taxonomy shared by all bfgrow components.
#pragma once

#include <stdexcept>
#include <string>

namespace bfgrow {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Matrix or vector shapes are incompatible with the requested operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A design matrix does not have full column rank (up to tolerance).
class RankDeficient : public Error {
public:
    using Error::Error;
};

/// A fit produced a degenerate quantity, e.g. a zero residual sum of squares
/// in a denominator.
class DegenerateFit : public Error {
public:
    using Error::Error;
};

/// A scalar argument lies outside the mathematical domain of the function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A configuration object is internally inconsistent or infeasible.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An input collection that must be non-empty is empty.
class EmptyInput : public Error {
public:
    using Error::Error;
};

/// A file path could not be opened for reading.
class FileNotFound : public Error {
public:
    using Error::Error;
};

/// Malformed file content; the message names the offending row and column.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A required column is absent from (or duplicated in) a dataset header.
class MissingColumn : public Error {
public:
    using Error::Error;
};

/// A structured argument map does not match the expected command schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace bfgrow
