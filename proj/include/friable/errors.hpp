#pragma once

#include <stdexcept>
#include <string>

namespace friable {

// Argument outside the mathematical domain of an operation.
struct domain_error : std::domain_error {
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// Work or memory estimate exceeds the configured budget.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data (zero tables, tolerance overrides, grid specs).
struct format_error : std::runtime_error {
    explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

// A table does not cover the requested range (e.g. not enough zeros).
struct coverage_error : std::runtime_error {
    explicit coverage_error(const std::string& what) : std::runtime_error(what) {}
};

// An iteration failed to converge to the requested residual.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace friable
