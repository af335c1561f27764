#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "frm/gateway/store.hpp"

namespace frm::gateway {

struct Request {
  std::string method;  // GET or POST
  std::string path;    // e.g. /v1/measurements
  std::map<std::string, std::string> query;
  std::string body;  // canonical JSON, or line-delimited records for intake routes
};

struct Response {
  int status = 200;
  Json body = Json::object();

  std::string text() const { return canonical_dump(body); }
  bool ok() const { return status >= 200 && status < 300; }
};

using Clock = std::function<Timestamp()>;
Timestamp system_now();

// Verifies framed audit log bytes. `committed` is the event count the
// register claims; a shorter log fails at that position.
Json verify_report(std::string_view log_bytes, std::optional<std::uint64_t> committed);
// The request handler shared by the HTTP server and the CLI.
//
// Reads work on the snapshot published when the request starts. Mutations
// are serialized: each runs against a private copy of the snapshot, and on
// success exactly one audit event is appended and the copy is committed and
// published. A failed mutation leaves both the register and the log as
// they were.
class Engine {
 public:
  explicit Engine(Store store, Clock clock = system_now);
  // Memory-only engine: commits are kept in memory.
  Engine(registry::Snapshot snapshot, Config config, Clock clock = system_now);

  Response handle(const Request& request);

  std::shared_ptr<const registry::Snapshot> snapshot() const;
  std::vector<registry::AuditEvent> audit_events() const;
  const Config& config() const { return config_; }
  const std::optional<Store>& store() const { return store_; }

 private:
  using Mutation = std::function<Json(registry::Snapshot&, AuditBuffer&, Timestamp)>;

  Response dispatch(const Request& request);
  Json mutate(const std::string& label, const std::string& actor, const Mutation& op);

  Config config_;
  registry::Settings settings_;
  std::optional<Store> store_;
  Clock clock_;

  std::mutex writer_;
  mutable std::mutex publish_;
  std::shared_ptr<const registry::Snapshot> current_;
  registry::AuditLog log_;  // guarded by writer_ for appends, publish_ for reads
};

}  // namespace frm::gateway
