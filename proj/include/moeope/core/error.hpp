#pragma once

#include <stdexcept>
#include <string>

namespace moeope {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A model was asked to predict for an action it has no data for.
class NoSupport : public Error {
 public:
  using Error::Error;
};

class InsufficientPairs : public Error {
 public:
  using Error::Error;
};

class CoverageViolation : public Error {
 public:
  using Error::Error;
};

class Diverged : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration. `path` names the offending field (e.g. "sim.horizon").
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace moeope
