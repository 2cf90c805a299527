#pragma once

#include <memory>
#include <string>

#include "convbrowse/catalog.hpp"
#include "convbrowse/engine.hpp"
#include "convbrowse/search.hpp"
#include "convbrowse/session_store.hpp"
#include "convbrowse/transcript.hpp"

namespace httplib {
class Server;
}

namespace convbrowse {

/// JSON-over-HTTP API:
///
///   POST /sessions                      -> {session_id, message}
///   POST /sessions/{id}/actions         {kind, entities[]} -> {message}
///   GET  /sessions/{id}                 -> {session_id, phase, turn, transcript[]}
///   GET  /sessions/{id}/transcript      -> line-delimited transcript
///   GET  /search?q=...&k=...            -> {query, hits[]}
///   GET  /catalog/summary               -> {items, attributes[], text}
///   GET  /health                        -> {status: "ok"}
///
/// Errors carry {code, message}: 400 malformed_action, 404
/// unknown_session, 410 session_expired, 422 for protocol errors (plus a
/// `reprompt` message).
class HttpService {
 public:
  HttpService(const CatalogIndex& index, SelectionConfig selection, TemplateTable templates,
              SessionStore::Options options, SearchOptions search = {});
  ~HttpService();

  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Blocking.
  void listen();
  void stop();
  void wait_until_ready() const;

  SessionStore& sessions() { return sessions_; }
  const DialogueEngine& engine() const { return engine_; }

  /// Catalog overview document (also served at /catalog/summary).
  Json catalog_summary(std::size_t per_attribute) const;

 private:
  void install_routes();

  const CatalogIndex* index_;
  DialogueEngine engine_;
  SearchIndex search_;
  SessionStore sessions_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace convbrowse
