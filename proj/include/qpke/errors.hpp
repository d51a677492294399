#pragma once

#include <stdexcept>
#include <string>

namespace qpke {

// Operand lengths or indices disagree.
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// A parameter violates an operation precondition (odd n, even-weight k1, ...).
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Request exceeds the dense-engine qubit limit.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Ciphertext does not match the decryption key material.
struct KeyMismatchError : std::runtime_error {
    explicit KeyMismatchError(const std::string& what) : std::runtime_error(what) {}
};

// A public key was used for encryption more than once.
struct SingleUseError : std::runtime_error {
    explicit SingleUseError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed serialized object.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qpke
