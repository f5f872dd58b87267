#ifndef POSTVRP_ERROR_HPP
#define POSTVRP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace postvrp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based; column 0 means "whole line".
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error("line " + std::to_string(line) + (column ? ", column " + std::to_string(column) : "") + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Input that parses but violates a model or catalog invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

}

#endif
