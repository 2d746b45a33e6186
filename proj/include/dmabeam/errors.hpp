#pragma once

#include <stdexcept>
#include <string>

namespace dmabeam {

// Base class for all toolkit errors. kind() is the machine-readable class
// name the CLI prints and maps to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

// Invalid design description: bad i_beta, duplicate or degenerate nulls,
// asymmetric SymNull pairs, wrong method passed to a builder.
class SpecError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "SpecError"; }
};

// Not enough sensors for the requested constraint set.
class FeasibilityError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "FeasibilityError"; }
};

// Constraint Gram matrix is numerically singular (conflicting or duplicate
// constraints), or the solve failed to satisfy the constraints.
class RankError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "RankError"; }
};

class ZeroFilterError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ZeroFilterError"; }
};

// h^H Gamma_d h came out non-positive; signals numerical breakdown in DF.
class NonPositiveDenominator : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NonPositiveDenominator"; }
};

// Malformed config file or command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ConfigError"; }
};

}  // namespace dmabeam
