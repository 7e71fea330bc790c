#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ostat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments outside the mathematical domain of an operation
/// (unsorted indices, an index vector not in the summation set, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-square matrix, or mismatched sizes between related inputs.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An input kind the operation cannot handle (e.g. a continuous
/// distribution passed to the exhaustive discrete oracle).
class TypeError : public Error {
 public:
  using Error::Error;
};

/// Invalid distribution or problem parameters detected at construction.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A hard work cap was exceeded. The message names the cap.
class SizeCapError : public Error {
 public:
  SizeCapError(const std::string& what_cap, std::size_t requested, std::size_t limit)
      : Error(what_cap + ": requested " + std::to_string(requested) + " exceeds the cap of " +
              std::to_string(limit)),
        requested_(requested),
        limit_(limit) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t requested_;
  std::size_t limit_;
};

}  // namespace ostat
