#pragma once

#include <stdexcept>
#include <string>

namespace conetorsion {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class CutoffInsufficient : public Error {
 public:
  CutoffInsufficient(const std::string& what, double required)
      : Error(what), required_cutoff(required) {}
  double required_cutoff;
};

class StiffnessError : public Error {
 public:
  using Error::Error;
};

// Configuration problem at a JSON field path such as "cross_section.basis[1]".
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& msg)
      : Error(path + ": " + msg), field(path) {}
  std::string field;
};

}  // namespace conetorsion
