#pragma once

#include <stdexcept>
#include <string>

namespace rowcomp {

// Input file could not be parsed. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Lookup of an id that is not registered in the knowledge base or index.
class UnknownIdError : public std::runtime_error {
public:
    explicit UnknownIdError(const std::string& id)
        : std::runtime_error("unknown id: " + id) {}
};

// External client (HTTP generator / search) failure.
class ClientError : public std::runtime_error {
public:
    ClientError(std::string message, bool retryable)
        : std::runtime_error(std::move(message)), retryable_(retryable) {}

    bool retryable() const { return retryable_; }

private:
    bool retryable_;
};

}  // namespace rowcomp
