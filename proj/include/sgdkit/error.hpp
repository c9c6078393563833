#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgdkit {

// Malformed input document. line/column are 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(format(message, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, std::size_t line, std::size_t column) {
        if (line == 0) return message;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
    }

    std::size_t line_;
    std::size_t column_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sgdkit
