#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rbfqf {

/// Base class for numerical failures raised by the library. Precondition
/// violations use std::invalid_argument / std::domain_error instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A matrix that must have full (row or column) rank does not.
class RankDeficientError : public Error {
public:
    RankDeficientError(const std::string& what, std::size_t rank, std::size_t expected)
        : Error(what + " (numerical rank " + std::to_string(rank) + " of " +
                std::to_string(expected) + ")"),
          rank_(rank), expected_(expected) {}

    std::size_t rank() const noexcept { return rank_; }
    std::size_t expected() const noexcept { return expected_; }

private:
    std::size_t rank_;
    std::size_t expected_;
};

/// A linear system is singular or its condition estimate exceeds the limit.
class SingularSystemError : public Error {
public:
    SingularSystemError(const std::string& what, double condition)
        : Error(what + " (condition estimate " + std::to_string(condition) + ")"),
          condition_(condition) {}

    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// An adaptive procedure stopped before reaching its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : Error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

} // namespace rbfqf
