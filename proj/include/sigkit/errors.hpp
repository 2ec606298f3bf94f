#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sigkit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptySample : Error {
    using Error::Error;
};

struct NonFiniteScore : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct ZeroVariance : Error {
    using Error::Error;
};

struct DegenerateRanks : Error {
    using Error::Error;
};

struct PairLengthMismatch : Error {
    using Error::Error;
};

struct AllZeroDifferences : Error {
    using Error::Error;
};

struct DuplicateName : Error {
    using Error::Error;
};

struct DuplicateGroup : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Input position is 1-based; column 0 means "whole line".
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line_no, std::size_t column_no)
        : Error("line " + std::to_string(line_no) + ", column " + std::to_string(column_no) +
                ": " + msg),
          line(line_no),
          column(column_no) {}

    std::size_t line;
    std::size_t column;
};

}  // namespace sigkit
