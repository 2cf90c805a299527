#include "convbrowse/service.hpp"

#include <httplib.h>

#include <charconv>

namespace convbrowse {

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, std::string code, const std::string& message) {
  send(res, status, Json{{"code", std::move(code)}, {"message", message}});
}

Json session_document(const std::string& id, const SessionState& state) {
  Json transcript = Json::array();
  for (const auto& entry : state.transcript) transcript.push_back(transcript_record(entry));
  return Json{{"session_id", id},
              {"phase", std::string(to_string(state.phase))},
              {"turn", state.turn},
              {"candidate_count", state.candidates.size()},
              {"transcript", std::move(transcript)}};
}

}  // namespace

HttpService::HttpService(const CatalogIndex& index, SelectionConfig selection,
                         TemplateTable templates, SessionStore::Options options,
                         SearchOptions search)
    : index_(&index),
      engine_(index, selection, std::move(templates)),
      search_(SearchIndex::build(index, search)),
      sessions_(engine_, std::move(options)),
      server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  if (!server_->bind_to_port(host, port)) return -1;
  return port;
}

void HttpService::listen() { server_->listen_after_bind(); }

void HttpService::stop() {
  if (server_) server_->stop();
}

void HttpService::wait_until_ready() const { server_->wait_until_ready(); }

Json HttpService::catalog_summary(std::size_t per_attribute) const {
  Json attributes = Json::array();
  const auto all = index_->all_items();
  for (const auto& a : index_->attributes()) {
    Json top = Json::array();
    if (a.browsable) {
      for (const auto& r : ranked_entities(*index_, a.name, all, 0, per_attribute)) {
        top.push_back(Json{{"value", r.entity.value}, {"score", r.score}});
      }
    }
    attributes.push_back(Json{{"name", a.name},
                              {"browsable", a.browsable},
                              {"entities", a.entities.size()},
                              {"top", std::move(top)}});
  }
  return Json{{"name", index_->manifest().name},
              {"items", index_->item_count()},
              {"attributes", std::move(attributes)},
              {"text", engine_.overview(per_attribute).rendered_text}};
}

void HttpService::install_routes() {
  auto& srv = *server_;

  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  srv.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  srv.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    send(res, 200, Json{{"status", "ok"}});
  });

  srv.Get("/catalog/summary", [this](const httplib::Request& req, httplib::Response& res) {
    std::size_t per = 5;
    if (req.has_param("top")) {
      const auto v = req.get_param_value("top");
      std::from_chars(v.data(), v.data() + v.size(), per);
    }
    send(res, 200, catalog_summary(std::max<std::size_t>(per, 1)));
  });

  srv.Get("/search", [this](const httplib::Request& req, httplib::Response& res) {
    const auto query = req.get_param_value("q");
    std::size_t k = 10;
    if (req.has_param("k")) {
      const auto v = req.get_param_value("k");
      const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), k);
      if (ec != std::errc() || end != v.data() + v.size() || k < 1) {
        return send_error(res, 400, "bad_request", "k must be a positive integer");
      }
    }
    Json hits = Json::array();
    for (const auto& h : search_.search(query, k)) {
      const auto item = *index_->find_item(h.item_id);
      hits.push_back(Json{{"item_id", h.item_id},
                          {"title", index_->entity(index_->identifier_entity(item)).value},
                          {"score", h.score},
                          {"rank", h.rank}});
    }
    send(res, 200, Json{{"query", query}, {"hits", std::move(hits)}});
  });

  srv.Post("/sessions", [this](const httplib::Request&, httplib::Response& res) {
    sessions_.purge_expired();
    auto [id, message] = sessions_.create();
    send(res, 201, Json{{"session_id", id}, {"message", to_json(message)}});
  });

  // Shared error mapping for per-session routes.
  auto guarded = [this](auto handler) {
    return [this, handler](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.path_params.at("id");
      try {
        handler(id, req, res);
      } catch (const UnknownSessionError& e) {
        send_error(res, 404, "unknown_session", e.what());
      } catch (const SessionExpiredError& e) {
        send_error(res, 410, "session_expired", e.what());
      } catch (const WireFormatError& e) {
        send_error(res, 400, "malformed_action", e.what());
      } catch (const ProtocolError& e) {
        Json body{{"code", e.code()}, {"message", e.what()}};
        try {
          if (e.code() != "session_finished") body["reprompt"] = to_json(sessions_.reprompt(id));
        } catch (const Error&) {
        }
        send(res, 422, body);
      }
    };
  };

  srv.Get("/sessions/:id", guarded([this](const std::string& id, const httplib::Request&,
                                          httplib::Response& res) {
            send(res, 200, session_document(id, sessions_.snapshot(id)));
          }));

  srv.Get("/sessions/:id/transcript",
          guarded([this](const std::string& id, const httplib::Request&, httplib::Response& res) {
            res.status = 200;
            res.set_content(sessions_.transcript(id), "application/x-ndjson");
          }));

  srv.Post("/sessions/:id/actions",
           guarded([this](const std::string& id, const httplib::Request& req,
                          httplib::Response& res) {
             Json body;
             try {
               body = Json::parse(req.body);
             } catch (const nlohmann::json::exception& e) {
               throw WireFormatError(std::string("request body is not JSON: ") + e.what());
             }
             const auto action = action_from_json(body);
             send(res, 200, Json{{"message", to_json(sessions_.apply(id, action))}});
           }));

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                               std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send_error(res, 500, "internal_error", e.what());
    } catch (...) {
      send_error(res, 500, "internal_error", "unknown error");
    }
  });
}

}  // namespace convbrowse
