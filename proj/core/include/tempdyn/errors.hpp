#pragma once

#include <stdexcept>
#include <string>

namespace tempdyn {

// Exit codes used by the command-line driver. Library exceptions carry the
// code they should map onto so the driver stays a thin shell.
enum class exit_code : int {
    ok = 0,
    failure = 1,    // unexpected error
    validation = 2, // bad input, bad configuration, violated precondition
    numeric = 3,    // non-convergence, degenerate estimate, internal inconsistency
    io = 4,         // file system / parse trouble
};

class error : public std::runtime_error {
public:
    error(const std::string& msg, exit_code code) : std::runtime_error(msg), code_(code) {}
    exit_code code() const noexcept { return code_; }

private:
    exit_code code_;
};

// Invalid arguments, malformed inputs, violated preconditions.
class validation_error : public error {
public:
    explicit validation_error(const std::string& msg) : error(msg, exit_code::validation) {}
};

// Numerical failures: non-convergence, degenerate variances, likelihood decreases.
class numeric_error : public error {
public:
    explicit numeric_error(const std::string& msg) : error(msg, exit_code::numeric) {}
};

// File-system and serialization failures.
class io_error : public error {
public:
    explicit io_error(const std::string& msg) : error(msg, exit_code::io) {}
};

} // namespace tempdyn
