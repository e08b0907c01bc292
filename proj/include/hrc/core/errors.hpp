#pragma once

#include <stdexcept>
#include <string>

namespace hrc {

/// A caller broke a precondition. Signals a driver bug; never swallowed.
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A value or document failed validation (out-of-range parameter, bad input data).
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A configuration document is malformed. `key()` names the offending dotted path.
class ConfigError : public ValidationError {
public:
  ConfigError(std::string key, const std::string& message)
      : ValidationError("config key '" + key + "': " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

}  // namespace hrc
