#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace wavint {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration. Carries the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A numerical failure that cannot be recovered locally.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Raised when the global spectral system for one wavenumber is singular.
class SingularSystemError : public NumericalError {
 public:
  SingularSystemError(std::complex<double> wavenumber, const std::string& what)
      : NumericalError(what), wavenumber_(wavenumber) {}

  std::complex<double> wavenumber() const noexcept { return wavenumber_; }

 private:
  std::complex<double> wavenumber_;
};

}  // namespace wavint
