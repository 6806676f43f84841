#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace varcert {

enum class ErrorKind {
  kInput,         // malformed arguments, dimension mismatch
  kCapability,    // model or geometry lacks what the operation needs
  kPrecondition,  // a stated precondition failed on the data
  kNonSmooth,     // a single-valuedness assumption failed
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::kInput, what) {}
};

class CapabilityError : public Error {
 public:
  explicit CapabilityError(const std::string& what)
      : Error(ErrorKind::kCapability, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorKind::kPrecondition, what) {}
};

/// Raised when a proximal cluster is wider than the single-valuedness
/// tolerance. Carries the cluster so callers can report it.
class NonSmoothError : public Error {
 public:
  NonSmoothError(const std::string& what, std::vector<std::vector<double>> cluster)
      : Error(ErrorKind::kNonSmooth, what), cluster_(std::move(cluster)) {}

  const std::vector<std::vector<double>>& cluster() const noexcept { return cluster_; }

 private:
  std::vector<std::vector<double>> cluster_;
};

}  // namespace varcert
