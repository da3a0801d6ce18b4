#pragma once

#include <stdexcept>
#include <string>

namespace primeavg {

/// Thrown when a request exceeds a configured size limit (sieve range,
/// character modulus, FFT length, scale count).
class capacity_error : public std::length_error {
public:
    explicit capacity_error(const std::string& what) : std::length_error(what) {}
};

// Domain violations use std::domain_error directly.

}  // namespace primeavg
