#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cesaro {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad parameter values (out-of-range k, nonpositive abscissa, unknown mode).
class config_error : public error {
public:
    using error::error;
};

// A request exceeds a memory or table-size budget.
class capacity_error : public error {
public:
    using error::error;
};

// A zero-sum evaluation would exceed the configured term budget.
class budget_error : public error {
public:
    using error::error;
};

// Malformed input file; line is 1-based, 0 when not line-addressable.
class parse_error : public error {
public:
    parse_error(const std::string& msg, std::size_t line = 0)
        : error(line ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Gamma evaluated at a nonpositive integer.
class pole_error : public error {
public:
    using error::error;
};

// A result's log-magnitude exceeds what exp() can represent.
class overflow_error : public error {
public:
    using error::error;
};

} // namespace cesaro
