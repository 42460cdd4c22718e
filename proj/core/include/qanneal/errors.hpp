#pragma once

#include <stdexcept>
#include <string>

namespace qanneal {

// Precondition violations raise std::invalid_argument / std::out_of_range.
// The two types below mark failures that callers (the CLI in particular)
// map onto distinct exit codes.

/// An iterative method failed to reach its tolerance, a state lost its
/// normalization, or a quantity is undefined at the requested point.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ground level is degenerate where a unique ground state is required.
class DegenerateGroundState : public NumericalError {
 public:
  DegenerateGroundState(double s, double splitting)
      : NumericalError("ground state is degenerate at s=" + std::to_string(s) +
                       " (splitting " + std::to_string(splitting) + ")"),
        s_(s), splitting_(splitting) {}
  double s() const noexcept { return s_; }
  double splitting() const noexcept { return splitting_; }

 private:
  double s_;
  double splitting_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qanneal
