#pragma once

#include <stdexcept>
#include <string>

namespace convbrowse {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad manifest, missing column, empty table, missing template, bad config.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// The table itself violates a catalog invariant (e.g. duplicate identifier).
class IngestionError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

class UnknownEntityError : public ContractError {
 public:
  using ContractError::ContractError;
};

/// A Seeker action that is illegal in the current dialogue state.
class ProtocolError : public Error {
 public:
  ProtocolError(std::string code, const std::string& what)
      : Error(what), code_(std::move(code)) {}

  /// Machine-readable reason, e.g. "not_offered" or "session_finished".
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace convbrowse
