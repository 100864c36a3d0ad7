#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace powermix {

/// Argument outside the mathematical domain of an operation (non-positive
/// gamma argument, z on a support, u outside (0,1), invalid parameters).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A moment operation was asked for a law without finite moments.
class NoFiniteMomentError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// An integral that the engine refuses to report because it does not converge.
class DivergenceError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// Caller broke an operation's precondition (missing table entries, wrong family).
class PreconditionError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t position, std::string expected, const std::string& what)
        : std::runtime_error(what + " at position " + std::to_string(position) +
                             " (expected " + expected + ")"),
          position_(position),
          expected_(std::move(expected)) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& expected() const noexcept { return expected_; }

  private:
    std::size_t position_;
    std::string expected_;
};

}  // namespace powermix
