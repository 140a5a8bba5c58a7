#pragma once

#include <stdexcept>
#include <string>

namespace smin {

// Base class for every error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyInput : Error {
  using Error::Error;
};

struct DeltaOutOfRange : Error {
  using Error::Error;
};

// mu is not differentiable where both arguments vanish.
struct SingularPoint : Error {
  using Error::Error;
};

struct DimensionTooLarge : Error {
  using Error::Error;
};

struct AlphaTooLarge : Error {
  using Error::Error;
};

struct BadDimension : Error {
  using Error::Error;
};

struct SamplerStarved : Error {
  using Error::Error;
};

// The cone A_n^- is empty for the requested (n, alpha, beta).
struct EmptyDomain : Error {
  EmptyDomain(const std::string& msg, double beta_max_)
      : Error(msg), beta_max(beta_max_) {}
  double beta_max = 0.0;
};

struct StepTooLarge : Error {
  using Error::Error;
};

struct GridTooShort : Error {
  using Error::Error;
};

struct DomainViolation : Error {
  using Error::Error;
};

struct OutOfDomain : Error {
  using Error::Error;
};

}  // namespace smin
