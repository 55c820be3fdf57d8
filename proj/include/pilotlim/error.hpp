#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pilotlim {

enum class ErrorKind {
    invalid_argument,
    degenerate_field,
    needs_interior_time,
    time_resolution,
    no_path,
    multivalued,
    undefined_wavelength,
    io,
    validation,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; the kind drives CLI exit codes and
/// the machine-readable error report.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, const std::string& message) {
    if (!condition) fail(ErrorKind::invalid_argument, message);
}

}  // namespace pilotlim
