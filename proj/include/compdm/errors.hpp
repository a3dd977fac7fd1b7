#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace compdm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad or malformed input data (exit code 2 in the CLI).
class InputError : public Error {
public:
    using Error::Error;
};

/// Numeric preconditions violated by otherwise well-formed data (exit code 3).
class NumericError : public Error {
public:
    using Error::Error;
};

class NonPositiveEntry : public InputError {
public:
    explicit NonPositiveEntry(std::size_t index)
        : InputError("non-positive entry at index " + std::to_string(index)), index_(index) {}
    NonPositiveEntry(std::size_t line, std::size_t column)
        : InputError("non-positive entry at line " + std::to_string(line) + ", column " +
                     std::to_string(column)),
          index_(column), line_(line) {}

    std::size_t index() const noexcept { return index_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t index_ = 0;
    std::size_t line_ = 0;
};

class DimensionTooSmall : public InputError {
public:
    explicit DimensionTooSmall(std::size_t n)
        : InputError("composition needs at least 2 parts, got " + std::to_string(n)) {}
};

class DimensionMismatch : public InputError {
public:
    DimensionMismatch(std::size_t expected, std::size_t got)
        : InputError("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                     std::to_string(got)) {}
};

class WeightDimensionMismatch : public InputError {
public:
    WeightDimensionMismatch(std::size_t expected, std::size_t got)
        : InputError("DM weight vector has length " + std::to_string(got) + ", expected " +
                     std::to_string(expected)) {}
};

class InconsistentLogRatios : public NumericError {
public:
    explicit InconsistentLogRatios(double max_violation)
        : NumericError("log-ratios are not additively consistent (max violation " +
                       std::to_string(max_violation) + ")"),
          max_violation_(max_violation) {}

    double max_violation() const noexcept { return max_violation_; }

private:
    double max_violation_;
};

class InconsistentArray : public NumericError {
public:
    explicit InconsistentArray(double max_violation)
        : NumericError("average array is not additively consistent (max violation " +
                       std::to_string(max_violation) + ")"),
          max_violation_(max_violation) {}

    double max_violation() const noexcept { return max_violation_; }

private:
    double max_violation_;
};

class InsufficientSamples : public InputError {
public:
    InsufficientSamples(std::size_t needed, std::size_t got)
        : InputError("need at least " + std::to_string(needed) + " decision-makers, got " +
                     std::to_string(got)) {}
};

class AllZeroRatios : public NumericError {
public:
    AllZeroRatios(std::size_t i, std::size_t j)
        : NumericError("every decision-maker weighs criteria " + std::to_string(i) + " and " +
                       std::to_string(j) + " equally") {}
};

class TooManyClusters : public InputError {
public:
    TooManyClusters(std::size_t clusters, std::size_t points)
        : InputError("cannot form " + std::to_string(clusters) + " clusters from " +
                     std::to_string(points) + " decision-makers") {}
};

class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what)
        : InputError("parse error at line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class RaggedRow : public InputError {
public:
    RaggedRow(std::size_t line, std::size_t expected, std::size_t got)
        : InputError("line " + std::to_string(line) + " has " + std::to_string(got) +
                     " fields, expected " + std::to_string(expected)),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace compdm
