#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ocf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition (bad agent id, odd n, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// An exact oracle was asked for an instance beyond its configured size.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class InvalidMatchingError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Raised by RevealedGame when an algorithm reads a weight it may not see yet.
class HiddenWeightError : public Error {
 public:
  using Error::Error;
};

// The online loop aborted because an algorithm broke its contract.
class ContractViolation : public Error {
 public:
  ContractViolation(std::string what, std::vector<std::string> report)
      : Error(std::move(what)), report_(std::move(report)) {}
  const std::vector<std::string>& report() const { return report_; }

 private:
  std::vector<std::string> report_;
};

}  // namespace ocf
