#include "convbrowse/session_store.hpp"

#include <array>
#include <fstream>
#include <random>

#include "convbrowse/transcript.hpp"

namespace convbrowse {

std::string new_session_id() {
  static thread_local std::random_device device;
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  for (int word = 0; word < 4; ++word) {
    auto bits = static_cast<std::uint32_t>(device());
    for (int nibble = 0; nibble < 8; ++nibble) {
      id.push_back(kHex[bits & 0xF]);
      bits >>= 4;
    }
  }
  return id;
}

SessionStore::SessionStore(const DialogueEngine& engine, Options options)
    : engine_(&engine), options_(std::move(options)) {
  if (options_.transcript_dir) std::filesystem::create_directories(*options_.transcript_dir);
}

std::chrono::steady_clock::time_point SessionStore::now() const {
  return options_.clock ? options_.clock() : std::chrono::steady_clock::now();
}

std::pair<std::string, Message> SessionStore::create() {
  auto resource = std::make_shared<Resource>();
  auto [state, message] = engine_->start_session();
  resource->state = std::move(state);
  resource->created = resource->last_active = now();

  std::string id;
  {
    std::lock_guard lock(mutex_);
    do {
      id = new_session_id();
    } while (sessions_.contains(id) || expired_.contains(id));
    sessions_.emplace(id, resource);
  }
  std::lock_guard session_lock(resource->mutex);
  persist(id, *resource);
  return {id, std::move(message)};
}

std::shared_ptr<SessionStore::Resource> SessionStore::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    if (expired_.contains(id)) throw SessionExpiredError("session " + id + " has expired");
    throw UnknownSessionError("no session " + id);
  }
  auto resource = it->second;
  // last_active is only written under the store mutex.
  if (now() - resource->last_active > options_.idle_expiry) {
    sessions_.erase(it);
    expired_.insert(id);
    throw SessionExpiredError("session " + id + " has expired");
  }
  resource->last_active = now();
  return resource;
}

Message SessionStore::apply(const std::string& id, const Action& action) {
  const auto resource = find(id);
  std::lock_guard lock(resource->mutex);
  auto reply = engine_->apply_action(resource->state, action);
  persist(id, *resource);
  return reply;
}

std::string SessionStore::transcript(const std::string& id) {
  const auto resource = find(id);
  std::lock_guard lock(resource->mutex);
  return export_transcript(resource->state.transcript);
}

SessionState SessionStore::snapshot(const std::string& id) {
  const auto resource = find(id);
  std::lock_guard lock(resource->mutex);
  return resource->state;
}

Message SessionStore::reprompt(const std::string& id) {
  const auto resource = find(id);
  std::lock_guard lock(resource->mutex);
  return engine_->reprompt(resource->state);
}

std::size_t SessionStore::purge_expired() {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  const auto t = now();
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (t - it->second->last_active > options_.idle_expiry) {
      expired_.insert(it->first);
      it = sessions_.erase(it);
      ++n;
    } else {
      ++it;
    }
  }
  return n;
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

void SessionStore::persist(const std::string& id, Resource& resource) const {
  if (!options_.transcript_dir) return;
  const auto& transcript = resource.state.transcript;
  if (resource.persisted >= transcript.size()) return;
  std::ofstream out(*options_.transcript_dir / (id + ".jsonl"), std::ios::app | std::ios::binary);
  if (!out) throw ConfigurationError("cannot append transcript for session " + id);
  for (auto i = resource.persisted; i < transcript.size(); ++i) {
    out << transcript_record(transcript[i]).dump() << '\n';
  }
  resource.persisted = transcript.size();
}

}  // namespace convbrowse
