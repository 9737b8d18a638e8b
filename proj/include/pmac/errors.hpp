// Error types shared across the pmac library.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pmac {

// Thrown when an operation would have to visit more states than its cap allows.
// CLI maps this to exit code 3.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::uint64_t required, std::uint64_t cap)
      : std::runtime_error("state count " + std::to_string(required) +
                           " exceeds cap " + std::to_string(cap)),
        required_(required),
        cap_(cap) {}

  std::uint64_t required() const { return required_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

// Thrown when an iterative solver hits its iteration budget before meeting
// its tolerance. CLI maps this to exit code 2.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

// Thrown when a closed-form classifier cannot place an instance in any
// region (should only happen for invalid inputs or exact boundary ties).
class ClassificationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a limit-regime formula is undefined because of an exact tie
// (e.g. a player whose two best gains are equal).
class TieError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pmac
