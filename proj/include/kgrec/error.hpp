#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgrec {

// Bad inputs or configuration; the CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Failures while executing otherwise valid requests; CLI exit code 2.
class RuntimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public ValidationError {
public:
    ParseError(const std::string& message, std::size_t line)
        : ValidationError(message + " (line " + std::to_string(line) + ")"),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace kgrec
