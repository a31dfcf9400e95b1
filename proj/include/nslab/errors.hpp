#pragma once

#include <stdexcept>
#include <string>

namespace nslab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A rough-data spectrum asks for modes the grid cannot dealias.
class SpecExceedsGrid : public Error {
 public:
  using Error::Error;
};

/// A solver step produced NaN or infinity.
class NonFinite : public Error {
 public:
  NonFinite(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class EmptySeries : public Error {
 public:
  using Error::Error;
};

class InvalidInterval : public Error {
 public:
  using Error::Error;
};

class ZeroEnstrophySample : public Error {
 public:
  using Error::Error;
};

class Unsorted : public Error {
 public:
  using Error::Error;
};

class InsufficientRange : public Error {
 public:
  using Error::Error;
};

class EmptyRange : public Error {
 public:
  using Error::Error;
};

/// Configuration problem; `field()` names the offending key as `section.key`.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace nslab
