#pragma once

#include <stdexcept>
#include <string>

namespace gapcode {

// Malformed text input (gap-set specs, graph files, spoke specs).
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// A bounded search exhausted its budget before it could certify its answer.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Numeric routine failed to meet its tolerance.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gapcode
