#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biogeo {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file. The message carries `source:line: reason`.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& reason)
        : Error(source + ":" + std::to_string(line) + ": " + reason), source_(source), line_(line) {}

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

// Kappa denominator is zero: chance agreement already equals N^2.
class UndefinedKappa : public Error {
public:
    using Error::Error;
};

}  // namespace biogeo
