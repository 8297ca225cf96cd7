// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace qds {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape mismatches: non-square input, incompatible operator dimensions.
struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// Violated construction invariants: non-Hermitian input, negative
// Kossakowski eigenvalues, weights that do not sum to one.
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Malformed or inconsistent experiment configuration.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Requested computation is too large to enumerate exactly.
struct SizeError : Error {
    explicit SizeError(const std::string& msg) : Error(msg) {}
};

} // namespace qds
