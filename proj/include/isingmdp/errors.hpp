#pragma once

#include <stdexcept>
#include <string>

namespace isingmdp {

struct LatticeTooLargeError : std::runtime_error {
    explicit LatticeTooLargeError(const std::string& what) : std::runtime_error(what) {}
};

// The +1 spins touch every row and every column without filling the torus,
// so no covering rectangle smaller than the full lattice exists.
struct AmbiguousWrapError : std::runtime_error {
    explicit AmbiguousWrapError(const std::string& what) : std::runtime_error(what) {}
};

struct StateExplosionError : std::runtime_error {
    explicit StateExplosionError(const std::string& what) : std::runtime_error(what) {}
};

struct ActionNotAvailableError : std::runtime_error {
    explicit ActionNotAvailableError(const std::string& what) : std::runtime_error(what) {}
};

struct NotAU1ConfigError : std::runtime_error {
    explicit NotAU1ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct NoClusterError : std::runtime_error {
    explicit NoClusterError(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystemError : std::runtime_error {
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

struct MaxIterExceededError : std::runtime_error {
    explicit MaxIterExceededError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace isingmdp
