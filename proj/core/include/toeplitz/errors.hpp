#pragma once

#include <stdexcept>
#include <string>

namespace toeplitz {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidIndex : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ParityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DepthExceeded : public Error {
 public:
  using Error::Error;
};

class NotInDomain : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// J(s) has no element in the requested Gamma_k coset; the tower cannot carry the construction.
class EmptySlot : public Error {
 public:
  using Error::Error;
};

class NonAbelianUnsupported : public Error {
 public:
  using Error::Error;
};

class InconclusiveTail : public Error {
 public:
  using Error::Error;
};

class UnknownCheck : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

// Two independent computations of the same quantity disagreed.
class Inconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace toeplitz
