#pragma once

#include <stdexcept>
#include <string>

namespace mmct {

/// Malformed references into a model or instance (bad index, missing variable,
/// size mismatch). Distinct from infeasibility, which is reported via result
/// types, never thrown.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

/// Rejected option combination (e.g. incompatible-pair constraints on the
/// strong flow model).
class UnsupportedOptionError : public std::invalid_argument {
public:
    explicit UnsupportedOptionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Text input that does not follow the expected format. Carries the 1-based
/// line number when known (0 otherwise).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace mmct
