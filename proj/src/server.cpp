#include "tandem/server.hpp"

#include <httplib.h>

#include "tandem/bundled_models.hpp"
#include "tandem/kernel.hpp"

namespace tandem {

namespace {

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void error(httplib::Response& res, int status, const std::string& what, Json extra = Json::object()) {
  extra["error"] = what;
  reply(res, status, extra);
}

std::optional<Json> parse_body(const httplib::Request& req, httplib::Response& res) {
  try {
    return Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    error(res, 400, std::string("malformed JSON body: ") + e.what());
    return std::nullopt;
  }
}

// Runs a session handler, mapping the animator's exceptions onto statuses.
template <typename F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const SessionNotFound& e) {
    error(res, 404, e.what());
  } catch (const StepRejected& e) {
    error(res, 409, e.what(), {{"view", e.view()}});
  } catch (const ModelError& e) {
    error(res, 400, e.what(), {{"line", e.loc().line}, {"column", e.loc().column}});
  } catch (const std::exception& e) {
    error(res, 500, e.what());
  }
}

}  // namespace

AnimatorServer::AnimatorServer(ServerOptions options)
    : options_(std::move(options)), sessions_(options_.enabled_cap), http_(std::make_unique<httplib::Server>()) {
  routes();
}

AnimatorServer::~AnimatorServer() { stop(); }

void AnimatorServer::routes() {
  auto& s = *http_;

  s.Get("/api/models", [](const httplib::Request&, httplib::Response& res) {
    Json names = Json::array();
    for (const auto& b : bundled_models()) names.push_back(b.name);
    reply(res, 200, {{"models", names}});
  });

  s.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::string source = req.body;
      if (req.get_header_value("Content-Type").starts_with(kJson)) {
        const auto body = parse_body(req, res);
        if (!body) return;
        if (body->is_object() && body->contains("bundled") && (*body)["bundled"].is_string()) {
          try {
            source = bundled_source((*body)["bundled"].get<std::string>());
          } catch (const std::out_of_range& e) {
            return error(res, 404, e.what());
          }
        } else if (body->is_object() && body->contains("source") && (*body)["source"].is_string()) {
          source = (*body)["source"].get<std::string>();
        } else {
          return error(res, 400, "expected {\"source\": ...} or {\"bundled\": ...}");
        }
      }
      auto [id, view] = sessions_.create(source);
      reply(res, 201, {{"id", id}, {"view", view}});
    });
  });

  s.Get(R"(/api/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, sessions_.view(req.matches[1])); });
  });

  s.Delete(R"(/api/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    if (sessions_.remove(req.matches[1])) {
      res.status = 204;
    } else {
      error(res, 404, "no session " + std::string(req.matches[1]));
    }
  });

  s.Post(R"(/api/sessions/([^/]+)/step)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = parse_body(req, res);
      if (!body) return;
      if (!body->is_object() || !body->contains("op") || !(*body)["op"].is_string()) {
        return error(res, 400, "expected {\"op\": name, \"params\": {...}}");
      }
      const Json params = body->value("params", Json::object());
      reply(res, 200, sessions_.step(req.matches[1], (*body)["op"].get<std::string>(), params));
    });
  });

  s.Post(R"(/api/sessions/([^/]+)/backtrack)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = parse_body(req, res);
      if (!body) return;
      const Json n = body->is_object() ? body->value("n", Json(1)) : Json();
      if (!n.is_number_integer()) return error(res, 400, "expected {\"n\": positive integer}");
      reply(res, 200, sessions_.backtrack(req.matches[1], n.get<long>()));
    });
  });

  s.Get(R"(/api/sessions/([^/]+)/trace)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      res.set_header("Content-Disposition", "attachment; filename=\"session.trace\"");
      res.set_content(write_trace(sessions_.export_trace(req.matches[1])), "application/x-ndjson");
    });
  });

  s.Get(R"(/api/sessions/([^/]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    Json first;
    try {
      first = sessions_.view(id);
    } catch (const SessionNotFound& e) {
      return error(res, 404, e.what());
    }
    res.set_header("Cache-Control", "no-cache");
    auto version = std::make_shared<std::uint64_t>(first["version"].get<std::uint64_t>());
    auto pending = std::make_shared<std::optional<Json>>(std::move(first));
    res.set_chunked_content_provider("text/event-stream", [this, id, version, pending](std::size_t, httplib::DataSink& sink) {
      auto send = [&](const Json& view) {
        const auto text = "event: view\ndata: " + view.dump() + "\n\n";
        return sink.write(text.data(), text.size());
      };
      if (*pending) {
        const bool ok = send(**pending);
        pending->reset();
        return ok;
      }
      try {
        const auto change = sessions_.wait_for_change(id, *version, std::chrono::milliseconds(500));
        if (!sink.is_writable()) return false;
        if (!change) {
          static constexpr char kKeepAlive[] = ": keep-alive\n\n";
          return sink.write(kKeepAlive, sizeof kKeepAlive - 1);
        }
        *version = change->first;
        return send(change->second);
      } catch (const SessionNotFound&) {
        sink.done();
        return true;
      }
    });
  });

  if (options_.static_dir) s.set_mount_point("/", options_.static_dir->string());
}

void AnimatorServer::bind() {
  if (options_.port == 0) {
    port_ = http_->bind_to_any_port(options_.host);
  } else if (http_->bind_to_port(options_.host, options_.port)) {
    port_ = options_.port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) {
    throw std::runtime_error("cannot listen on " + options_.host + ":" + std::to_string(options_.port));
  }
}

int AnimatorServer::start() {
  bind();
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return port_;
}

void AnimatorServer::run() {
  bind();
  http_->listen_after_bind();
}

void AnimatorServer::stop() {
  sessions_.shutdown();
  http_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace tandem
