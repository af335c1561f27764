#include "frm/gateway/http.hpp"

#include <httplib.h>

namespace frm::gateway {

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(Engine& engine) : impl_(std::make_unique<Impl>()) {
  const auto route = [&engine](const httplib::Request& in, httplib::Response& out) {
    Request req{in.method, in.path, {}, in.body};
    for (const auto& [key, value] : in.params) req.query[key] = value;
    const Response res = engine.handle(req);
    out.status = res.status;
    out.set_content(res.text(), "application/json");
  };
  auto& s = impl_->server;
  s.Get(".*", route);
  s.Post(".*", route);
  s.Put(".*", route);
  s.Delete(".*", route);
  s.Patch(".*", route);
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

bool serve(Engine& engine, const std::string& host, int port) {
  HttpServer server(engine);
  if (server.bind(host, port) < 0) return false;
  return server.run();
}

}  // namespace frm::gateway
