#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace muxdyn {

/// Malformed or inconsistent input (manifests, configs, parameters).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Manifest syntax error. `line()` is 1-based, 0 when unknown.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line)
        : InputError(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Iterative solver did not converge, unstable step size, etc.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace muxdyn
