#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skyrx {

// Precondition violated by a caller-supplied argument.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Index outside the addressed container.
class BoundsError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Malformed file or wire data. Carries the byte offset where parsing failed.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Well-formed data that violates a protocol rule (duplicates, conflicting fields).
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure that cannot be recovered (non-finite data, unfactorable matrix).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace skyrx
