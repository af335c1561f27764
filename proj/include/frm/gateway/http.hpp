#pragma once

#include <memory>
#include <string>

#include "frm/gateway/engine.hpp"

namespace frm::gateway {

// HTTP/1.1 front end for an engine. Every request is passed to
// Engine::handle and answered with its canonical JSON body.
class HttpServer {
 public:
  explicit HttpServer(Engine& engine);
  ~HttpServer();

  // Port 0 picks a free port. Returns the bound port, or -1 on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  bool run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Serves the engine until the process is stopped. Returns false when the
// address cannot be bound.
bool serve(Engine& engine, const std::string& host, int port);

}  // namespace frm::gateway
