#pragma once

#include <stdexcept>
#include <string>

namespace gcss {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Truncated Fock space too small for the requested operation.
class TruncationError : public Error {
public:
    using Error::Error;
};

// A superposition collapsed to (numerical) zero norm.
class NullStateError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// Bad grids, bad parameters, unparseable config.
class ConfigError : public Error {
public:
    using Error::Error;
};

class DegenerateBatchError : public Error {
public:
    using Error::Error;
};

class IntegrationError : public Error {
public:
    using Error::Error;
};

}  // namespace gcss
