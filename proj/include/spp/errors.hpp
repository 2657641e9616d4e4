#pragma once

#include <stdexcept>
#include <string>

namespace spp {

// Argument outside the mathematical domain of an operation (x or q outside [0,1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke a structural precondition (length mismatch, empty model, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The quantity exists only for some distribution families (e.g. density-based checks).
class NotApplicableError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The environment's round budget is exhausted.
class HorizonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid learner or experiment configuration. `path` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace spp
