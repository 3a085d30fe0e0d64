#pragma once

#include <stdexcept>
#include <string>

namespace cachemix {

enum class ErrorKind {
    invalid_parameter,
    invalid_input,
    io_error,
    parse_error,
    too_large,
    no_convergence,
    invalid_paths,
    internal
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::io_error: return "io-error";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::too_large: return "too-large";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::invalid_paths: return "invalid-paths";
    case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

} // namespace cachemix
