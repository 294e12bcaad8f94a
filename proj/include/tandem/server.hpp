#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "tandem/animator.hpp"

namespace httplib {
class Server;
}

namespace tandem {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8765;  // 0 picks a free port
  std::optional<std::filesystem::path> static_dir;  // UI assets, served at /
  std::size_t enabled_cap = 500;
};

/// HTTP front end of the animator. Routes (all JSON unless noted):
///
///   GET    /api/models                     bundled model names
///   POST   /api/sessions                   body: model source, or {"source"} / {"bundled"}
///   GET    /api/sessions/{id}              view
///   DELETE /api/sessions/{id}
///   POST   /api/sessions/{id}/step         {"op", "params"}
///   POST   /api/sessions/{id}/backtrack    {"n"}
///   GET    /api/sessions/{id}/trace        trace file (text)
///   GET    /api/sessions/{id}/events       server-sent events, one `view` event per change
class AnimatorServer {
 public:
  explicit AnimatorServer(ServerOptions options);
  ~AnimatorServer();

  /// Binds and serves on a background thread; returns the bound port.
  /// Throws std::runtime_error if the address cannot be bound.
  int start();
  /// Serves on the calling thread until stop().
  void run();
  void stop();

  int port() const { return port_; }
  SessionManager& sessions() { return sessions_; }

 private:
  void bind();
  void routes();

  ServerOptions options_;
  SessionManager sessions_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace tandem
