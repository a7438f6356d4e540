#pragma once

#include <stdexcept>
#include <string>

namespace sapfocs {

// Base class for all errors raised by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or out-of-range input data (bad CSV cell, ragged row, ...).
// CLI maps this to exit code 2.
class validation_error : public error {
public:
    explicit validation_error(const std::string& msg) : error(msg) {}
};

// Invalid run configuration (non-positive temperature, bad level file, ...).
// CLI maps this to exit code 3.
class config_error : public error {
public:
    explicit config_error(const std::string& msg) : error(msg) {}
};

// Requested exhaustive enumeration exceeds the configured cap.
// CLI maps this to exit code 4.
class cap_error : public error {
public:
    explicit cap_error(const std::string& msg) : error(msg) {}
};

} // namespace sapfocs
