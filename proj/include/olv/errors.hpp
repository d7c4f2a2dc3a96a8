// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace olv {

/// Bad input to an operation (non-positive spot, malformed config value, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested evaluation lies outside the domain of the source data.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Breakdown inside a numerical kernel. Carries the time-step index and,
/// when raised from a family operation, the spot-slice index.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::ptrdiff_t step, std::ptrdiff_t slice = -1)
        : std::runtime_error(what), step_(step), slice_(slice) {}

    std::ptrdiff_t step() const noexcept { return step_; }
    std::ptrdiff_t slice() const noexcept { return slice_; }

private:
    std::ptrdiff_t step_;
    std::ptrdiff_t slice_;
};

/// Malformed input file. line() is 1-based, 0 when not attributable to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input parsed but violates a semantic constraint (crossed quotes, empty groups).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, written or renamed. The message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Neither discrepancy rule produced a regularization parameter.
class NoSelectionError : public std::runtime_error {
public:
    struct Probe {
        double alpha;
        double residual;
    };

    NoSelectionError(const std::string& what, std::vector<Probe> trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const std::vector<Probe>& trace() const noexcept { return trace_; }

private:
    std::vector<Probe> trace_;
};

}  // namespace olv
