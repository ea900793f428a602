#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace angof {

/// Coarse classification carried by every library exception. The CLI maps
/// each class to an exit status and a machine-readable tag.
enum class ErrorClass {
  Domain,       // argument outside an operation's mathematical domain
  Numerical,    // quadrature/root-finding failure, non-monotone model CDF
  Degenerate,   // data too degenerate for the estimator (K < 2, zero variance)
  Unsupported,  // feature deliberately not implemented (p = inf limit law)
  Io,           // file access and parse failures
  Config,       // invalid run configuration
};

std::string_view to_string(ErrorClass c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorClass::Domain, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorClass::Numerical, what) {}
};

class DegenerateDataError : public Error {
 public:
  explicit DegenerateDataError(const std::string& what) : Error(ErrorClass::Degenerate, what) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what) : Error(ErrorClass::Unsupported, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorClass::Io, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorClass::Config, what) {}
};

inline std::string_view to_string(ErrorClass c) noexcept {
  switch (c) {
    case ErrorClass::Domain: return "domain";
    case ErrorClass::Numerical: return "numerical";
    case ErrorClass::Degenerate: return "degenerate_data";
    case ErrorClass::Unsupported: return "unsupported";
    case ErrorClass::Io: return "io";
    case ErrorClass::Config: return "config";
  }
  return "unknown";
}

}  // namespace angof
