#pragma once

#include <stdexcept>
#include <string>

namespace rsstoa {

// Base of every error the library raises. Callers that only care about
// success/failure catch this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A distance fell below kMinDistance (log and division would blow up).
class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

class InvalidParameterError : public Error {
public:
    using Error::Error;
};

// Gradient descent produced a non-finite iterate or cost.
class DivergenceError : public Error {
public:
    using Error::Error;
};

class EmptyGridError : public Error {
public:
    using Error::Error;
};

// No candidate in the search region is evaluable.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// Malformed or missing configuration / input files.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace rsstoa
