#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace growthsde {

/// A state lies outside the model's state space.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input: bad parameters, grids, observation sets or configs.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The operation has no implementation for the requested model.
class UnsupportedModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce an admissible result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The crossing bridge exhausted its attempts without a crossing.
class NoCrossingError : public NumericalError {
 public:
  NoCrossingError(std::string const& what, std::size_t attempts,
                  std::size_t interval = npos)
      : NumericalError(what), attempts_(attempts), interval_(interval) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t attempts() const noexcept { return attempts_; }
  /// Index of the observation interval, when raised from imputation.
  std::size_t interval() const noexcept { return interval_; }

 private:
  std::size_t attempts_;
  std::size_t interval_;
};

}  // namespace growthsde
