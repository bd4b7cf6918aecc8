#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace radrel {

// Semantically invalid values (negative rates, counts exceeding totals, ...).
// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structurally broken input (bad magic, truncation, unparsable JSON/CSV).
// Carries the byte offset where parsing gave up. CLI exit code 2.
class InputFormatError : public std::runtime_error {
public:
    InputFormatError(const std::string& message, std::uint64_t byte_offset)
        : std::runtime_error(message + " (at byte offset " + std::to_string(byte_offset) + ")"),
          offset_(byte_offset) {}

    explicit InputFormatError(const std::string& message)
        : std::runtime_error(message), offset_(0) {}

    std::uint64_t byte_offset() const { return offset_; }

private:
    std::uint64_t offset_;
};

} // namespace radrel
