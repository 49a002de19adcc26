#pragma once

#include <stdexcept>
#include <string>

namespace dcflow {

/// Malformed case file or JSON payload (maps to CLI exit code 2).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally well-formed input violating a model invariant (CLI exit code 3).
/// The message names the offending bus or line.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dcflow
