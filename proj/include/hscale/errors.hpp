#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hscale {

/// Argument outside the domain of a formula (weight past its lifetime,
/// degenerate index interval, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Mismatched shapes: key sets, grids, sizes.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A simulation produced a non-finite value. Carries the location.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, std::size_t path, std::int64_t key, std::size_t step)
      : std::runtime_error(what + " (path " + std::to_string(path) + ", key " +
                           std::to_string(key) + ", step " + std::to_string(step) + ")"),
        path_(path),
        key_(key),
        step_(step) {}

  std::size_t path() const noexcept { return path_; }
  std::int64_t key() const noexcept { return key_; }
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t path_;
  std::int64_t key_;
  std::size_t step_;
};

}  // namespace hscale
