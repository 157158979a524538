#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace circlops {

/// Input violates a documented precondition (bad parity, degenerate data, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A result failed an internal consistency contract. Indicates a bug or an
/// out-of-range numerical regime, never bad user input.
class ComputationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DegenerateCurve : public InvalidInput {
 public:
  DegenerateCurve(const std::string& what, std::size_t sample)
      : InvalidInput(what + " (sample " + std::to_string(sample) + ")"), sample_(sample) {}
  std::size_t sample() const noexcept { return sample_; }

 private:
  std::size_t sample_;
};

}  // namespace circlops
