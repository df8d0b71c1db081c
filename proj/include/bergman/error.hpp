#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bergman {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point or parameter left the region where the object is defined
/// (|z| >= 1 for interior operations, alpha <= -1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Arguments of different complex dimension were combined.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An invalid tuning parameter (radius outside (0,1), empty grid, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed (non-finite values after retries,
/// inconsistent radicand, quadrature that did not converge).
class NumericError : public Error {
public:
    using Error::Error;
};

/// Text input could not be parsed. Carries a 1-based line and column.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace bergman
