#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace listcomm {

// Malformed input text. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
          line_(line) {}
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

// Well-formed input that violates a contract (duplicate ids, bad parameter ranges).
class ValidationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside an operation's mathematical domain.
class DomainError : public std::domain_error {
    using std::domain_error::domain_error;
};

} // namespace listcomm
