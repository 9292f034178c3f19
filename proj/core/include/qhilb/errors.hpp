#pragma once

#include <stdexcept>
#include <string>

namespace qhilb {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input from a caller: malformed tokens, out-of-range indices, non-effective classes.
class UsageError : public Error {
public:
    using Error::Error;
};

// Incompatible settings, e.g. adding series with different truncations.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A q3 exponent beyond the configured truncation was requested.
class TruncationError : public Error {
public:
    using Error::Error;
};

// Internal data contradicts itself (singular pairing, inconsistent linear system).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// A quantum computation needed an invariant that is not known.
class MissingInvariantError : public Error {
public:
    MissingInvariantError(std::string key, std::string reason)
        : Error("missing invariant " + key + ": " + reason), key_(std::move(key)), reason_(std::move(reason)) {}

    const std::string& key() const noexcept { return key_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string key_;
    std::string reason_;
};

} // namespace qhilb
