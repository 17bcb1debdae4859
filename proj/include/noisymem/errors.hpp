#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace noisymem {

/// Invalid argument: non-positive delay, step count out of range, mismatched grids.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The model itself is inconsistent (non-finite initial segment, failed drift decomposition).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A coefficient or kernel produced a non-finite value while stepping.
class NumericalBlowup : public std::runtime_error {
 public:
  NumericalBlowup(std::size_t step, const std::string& what)
      : std::runtime_error("numerical blowup at step " + std::to_string(step) + ": " + what),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace noisymem
