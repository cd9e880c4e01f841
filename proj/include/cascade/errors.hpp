#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace cascade {

//! Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

//! Input violates a documented invariant or precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

//! Malformed document text; carries the 1-based line and column.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : ValidationError(what), line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

//! A requested model, scenario or attachment does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

//! A target cannot be reached; max_achievable is the best value attainable.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, double max_achievable)
        : Error(what), max_achievable_(max_achievable) {}
    double max_achievable() const { return max_achievable_; }

private:
    double max_achievable_;
};

//! Persistence failed: unreadable bundled data, I/O failure or write conflict.
class StorageError : public Error {
public:
    explicit StorageError(const std::string& what, bool conflict = false)
        : Error(what), conflict_(conflict) {}
    bool conflict() const { return conflict_; }

private:
    bool conflict_;
};

}  // namespace cascade
