#pragma once

#include <stdexcept>
#include <string>

namespace dnls {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidScale : public Error {
 public:
  using Error::Error;
};

class CannotNormalize : public Error {
 public:
  using Error::Error;
};

class InvalidPattern : public Error {
 public:
  using Error::Error;
};

// Sum-weighted energy estimate or first-order energy shift has a vanishing
// denominator (typically a sign-alternating state).
class UndefinedDiagnostic : public Error {
 public:
  using Error::Error;
};

class NoDecayingTail : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

// The linearised system is numerically singular.  Carries the smallest pivot
// seen during elimination.
class NearDegenerate : public Error {
 public:
  NearDegenerate(const std::string& what, double smallest_pivot)
      : Error(what), smallest_pivot_(smallest_pivot) {}
  double smallest_pivot() const noexcept { return smallest_pivot_; }

 private:
  double smallest_pivot_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error("configuration error in '" + field + "': " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace dnls
