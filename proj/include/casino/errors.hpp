#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace casino {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration, bad usage, or an input file that cannot be opened.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data that parses but violates a dataset invariant, or does not parse.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::string message, std::vector<std::string> offenders = {})
      : Error(std::move(message)), offenders_(std::move(offenders)) {}

  const std::vector<std::string>& offenders() const noexcept { return offenders_; }

 private:
  std::vector<std::string> offenders_;
};

/// A persisted artifact (model bundle) that does not match the running code or data.
class ArtifactError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not produce a finite result.
class NumericalError : public Error {
 public:
  NumericalError(std::string message, std::vector<double> last_iterate)
      : Error(std::move(message)), last_iterate_(std::move(last_iterate)) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

}  // namespace casino
