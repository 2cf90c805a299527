#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "convbrowse/engine.hpp"
#include "convbrowse/errors.hpp"

namespace convbrowse {

class UnknownSessionError : public Error {
 public:
  using Error::Error;
};

class SessionExpiredError : public Error {
 public:
  using Error::Error;
};

/// 128 random bits as 32 lower-case hex digits.
std::string new_session_id();

/// Live sessions over one engine. Each session is single-writer: actions
/// on the same session are serialized (a second caller waits), while
/// distinct sessions proceed in parallel.
class SessionStore {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  struct Options {
    std::chrono::seconds idle_expiry{30 * 60};
    /// When set, each session's transcript is appended to <dir>/<id>.jsonl.
    std::optional<std::filesystem::path> transcript_dir;
    /// Defaults to steady_clock::now.
    Clock clock;
  };

  SessionStore(const DialogueEngine& engine, Options options);

  std::pair<std::string, Message> create();
  /// Throws UnknownSessionError, SessionExpiredError or ProtocolError.
  Message apply(const std::string& id, const Action& action);
  /// Line-delimited transcript of the session.
  std::string transcript(const std::string& id);
  /// Copy of the session state.
  SessionState snapshot(const std::string& id);
  /// Re-ask the latest question of a session.
  Message reprompt(const std::string& id);

  /// Drops idle sessions; returns how many expired.
  std::size_t purge_expired();
  std::size_t size() const;

  const DialogueEngine& engine() const { return *engine_; }

 private:
  struct Resource {
    std::mutex mutex;
    SessionState state;
    std::chrono::steady_clock::time_point created;
    std::chrono::steady_clock::time_point last_active;
    std::size_t persisted = 0;
  };

  std::shared_ptr<Resource> find(const std::string& id);
  void persist(const std::string& id, Resource& resource) const;
  std::chrono::steady_clock::time_point now() const;

  const DialogueEngine* engine_;
  Options options_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<Resource>> sessions_;
  std::unordered_set<std::string> expired_;
};

}  // namespace convbrowse
