#pragma once

#include <stdexcept>
#include <string>
#include <cstdint>

namespace dualcluster {

// Error taxonomy shared by the library, the C API and the CLI exit codes.
enum class ErrorKind {
  Usage,         // bad arguments, unsupported configuration, domain errors
  Capacity,      // size beyond a configured ceiling or budget
  Accuracy,      // requested tolerance cannot be met
  Inconsistent,  // internal cross-checks or model consistency failed
  Infeasible,    // constraint system has no admissible solution
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when a work budget runs out mid-computation; carries the progress
// made so that callers can report partial results.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(std::string message, std::uint64_t completed)
      : Error(ErrorKind::Capacity, std::move(message)), completed_(completed) {}
  std::uint64_t completed() const noexcept { return completed_; }

 private:
  std::uint64_t completed_;
};

}  // namespace dualcluster
