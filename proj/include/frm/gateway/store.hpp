#pragma once

#include <filesystem>
#include <functional>
#include <string_view>

#include "frm/gateway/config.hpp"
#include "frm/register/audit_log.hpp"
#include "frm/register/snapshot.hpp"

namespace frm::gateway {

// Called at each step of the write path with the step name. Tests throw from
// it to simulate a crash at that point; bytes already written stay on disk.
//   log.append.begin, log.append.half, log.append.written, log.synced,
//   register.tmp.half, register.tmp.written, register.tmp.synced,
//   register.renamed
using FaultHook = std::function<void(std::string_view step)>;

struct LoadedStore {
  Config config;
  registry::Snapshot snapshot;
  registry::AuditLog log;
  std::uint64_t discarded_events = 0;  // uncommitted events dropped from the log tail
  bool discarded_torn_tail = false;
  bool removed_temp_file = false;
};

// Store directory: config.json, register.json and audit.log.
//
// A commit appends the audit event to the log, then replaces the register
// through a temporary file and a rename. The register records how many log
// events it covers, so on load any log tail beyond that count (a commit that
// never reached the rename, or a torn record) is discarded.
class Store {
 public:
  explicit Store(std::filesystem::path dir);

  // Creates the directory with an empty register. Throws InvalidArgument if
  // a register already exists there.
  static Store create(const std::filesystem::path& dir, const Config& config);

  // Throws VersionMismatch, ChainBroken, SchemaViolation or Io.
  LoadedStore load() const;

  // `event` must be the next event of the log the snapshot was loaded with,
  // and `next` must already carry the new audit count and head.
  void commit(const registry::Snapshot& next, const registry::AuditEvent& event) const;

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path register_path() const { return dir_ / "register.json"; }
  std::filesystem::path log_path() const { return dir_ / "audit.log"; }
  std::filesystem::path config_path() const { return dir_ / "config.json"; }

  FaultHook fault_hook;

 private:
  void step(std::string_view name) const;
  void write_register(const registry::Snapshot& s) const;

  std::filesystem::path dir_;
};

// A register with no content, carrying the schedule defaults of `config`.
registry::Snapshot empty_snapshot(const Config& config);

std::string read_file(const std::filesystem::path& file);

}  // namespace frm::gateway
