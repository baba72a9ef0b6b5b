#pragma once

#include <stdexcept>
#include <string>

namespace postfid {

/// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input violates a numerical precondition (non-Hermitian, not PSD,
/// dimension mismatch, parameter out of range).
struct numeric_error : error {
    explicit numeric_error(const std::string& msg) : error(msg) {}
};

/// A truncated Fock space was too small for the requested operation
/// (coherent tail above budget, amplifier trace leak, photon overflow).
struct truncation_error : error {
    explicit truncation_error(const std::string& msg) : error(msg) {}
};

/// A phase or sign convention failed its consistency check.
struct convention_error : error {
    explicit convention_error(const std::string& msg) : error(msg) {}
};

} // namespace postfid
