#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fairtrack {

/// Invalid argument, configuration or precondition. The CLI maps it to exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written. Exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file content. Carries the byte offset (binary) or line number (text).
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::uint64_t position)
        : std::runtime_error(what + " (at " + std::to_string(position) + ")"), position_(position) {}

    std::uint64_t position() const noexcept { return position_; }

private:
    std::uint64_t position_;
};

}  // namespace fairtrack
