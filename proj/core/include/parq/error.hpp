#pragma once

#include <stdexcept>
#include <string>

namespace parq {

// Bad argument shape or value: length mismatch, rank out of range,
// non-finite coordinate, negative workload.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A comparison premise (u ≺_P v, u ≺_* v, x <= y, ...) does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid model or experiment parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed external input (trace files).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Refusal to estimate a stationary profile for a model that is not stable.
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(const std::string& what, double mean_sigma, double capacity)
      : std::runtime_error(what), mean_sigma_(mean_sigma), capacity_(capacity) {}

  double mean_sigma() const noexcept { return mean_sigma_; }
  // servers * E[xi]
  double capacity() const noexcept { return capacity_; }

 private:
  double mean_sigma_;
  double capacity_;
};

}  // namespace parq
