#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace latentspec {

// Base for every failure raised by the library. Each subclass names one
// failure class so callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class NotSymmetric : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class OutOfSupport : public Error {
 public:
  using Error::Error;
};

// Observed data that cannot come from the chosen family. Carries the
// offending (row, col) positions, truncated to the first few.
class SupportViolation : public Error {
 public:
  SupportViolation(std::string what, std::vector<std::pair<std::size_t, std::size_t>> cells)
      : Error(std::move(what)), cells_(std::move(cells)) {}

  const std::vector<std::pair<std::size_t, std::size_t>>& cells() const noexcept { return cells_; }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> cells_;
};

class DegenerateTail : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class EmptyGrid : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace latentspec
