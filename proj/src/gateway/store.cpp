#include "frm/gateway/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "frm/common/error.hpp"
#include "frm/register/codec.hpp"

namespace frm::gateway {
namespace fs = std::filesystem;
namespace {

[[noreturn]] void io_error(const std::string& what, const fs::path& p) {
  throw Error(ErrorCode::Io, what + " " + p.string() + ": " + std::strerror(errno));
}

class Fd {
 public:
  Fd(const fs::path& p, int flags) : fd_(::open(p.c_str(), flags | O_CLOEXEC, 0644)), path_(p) {
    if (fd_ < 0) io_error("cannot open", p);
  }
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;

  void write_all(std::string_view bytes) {
    while (!bytes.empty()) {
      const ssize_t n = ::write(fd_, bytes.data(), bytes.size());
      if (n < 0) {
        if (errno == EINTR) continue;
        io_error("cannot write", path_);
      }
      bytes.remove_prefix(static_cast<std::size_t>(n));
    }
  }
  void sync() {
    if (::fsync(fd_) != 0) io_error("cannot sync", path_);
  }

 private:
  int fd_;
  fs::path path_;
};

void sync_dir(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

void write_whole(const fs::path& p, std::string_view bytes) {
  Fd fd(p, O_WRONLY | O_CREAT | O_TRUNC);
  fd.write_all(bytes);
  fd.sync();
}

}  // namespace

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

registry::Snapshot empty_snapshot(const Config& config) {
  registry::Snapshot s;
  s.schedule.compute_growth_factor = config.compute_growth_factor;
  s.schedule.max_interval_days = config.max_interval_days;
  s.audit_head = registry::to_hex(registry::kGenesisHash);
  return s;
}

Store::Store(fs::path dir) : dir_(std::move(dir)) {}

Store Store::create(const fs::path& dir, const Config& config) {
  Store store(dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  if (fs::exists(store.register_path())) {
    throw Error(ErrorCode::InvalidArgument, "a store already exists at " + dir.string());
  }
  write_whole(store.config_path(), canonical_dump(encode_config(config)));
  write_whole(store.log_path(), "");
  store.write_register(empty_snapshot(config));
  return store;
}

void Store::step(std::string_view name) const {
  if (fault_hook) fault_hook(name);
}

void Store::write_register(const registry::Snapshot& s) const {
  const std::string doc = registry::export_register(s);
  const fs::path tmp = register_path().string() + ".tmp";
  {
    Fd fd(tmp, O_WRONLY | O_CREAT | O_TRUNC);
    const std::size_t half = doc.size() / 2;
    fd.write_all(std::string_view(doc).substr(0, half));
    step("register.tmp.half");
    fd.write_all(std::string_view(doc).substr(half));
    step("register.tmp.written");
    fd.sync();
    step("register.tmp.synced");
  }
  if (::rename(tmp.c_str(), register_path().c_str()) != 0) io_error("cannot rename", tmp);
  sync_dir(dir_);
  step("register.renamed");
}

void Store::commit(const registry::Snapshot& next, const registry::AuditEvent& event) const {
  const std::string record = registry::encode_record(event);
  step("log.append.begin");
  {
    Fd fd(log_path(), O_WRONLY | O_APPEND | O_CREAT);
    const std::size_t half = record.size() / 2;
    fd.write_all(std::string_view(record).substr(0, half));
    step("log.append.half");
    fd.write_all(std::string_view(record).substr(half));
    step("log.append.written");
    fd.sync();
  }
  step("log.synced");
  write_register(next);
}

LoadedStore Store::load() const {
  LoadedStore out;
  if (!fs::exists(register_path())) {
    throw Error(ErrorCode::Io, "no register at " + dir_.string() + " (run init first)");
  }
  out.config = load_config(config_path());

  const fs::path tmp = register_path().string() + ".tmp";
  if (fs::exists(tmp)) {
    fs::remove(tmp);
    out.removed_temp_file = true;
  }
  out.snapshot = registry::import_register(read_file(register_path()));

  const std::string bytes = fs::exists(log_path()) ? read_file(log_path()) : std::string();
  auto decoded = registry::decode_log(bytes);
  const std::uint64_t committed = out.snapshot.audit_count;
  if (decoded.events.size() < committed) {
    const std::string why = decoded.bad_record
                                ? "record " + std::to_string(*decoded.bad_record) + " is corrupt"
                                : "log ends after " + std::to_string(decoded.events.size()) + " events";
    throw Error(ErrorCode::ChainBroken, why + "; register covers " + std::to_string(committed));
  }
  out.discarded_events = decoded.events.size() - committed;
  out.discarded_torn_tail = decoded.torn_tail || decoded.bad_record.has_value();
  decoded.events.resize(committed);
  out.log = registry::AuditLog(std::move(decoded.events));
  if (registry::to_hex(out.log.head()) != out.snapshot.audit_head) {
    throw Error(ErrorCode::ChainBroken, "log head does not match the register");
  }

  std::size_t keep = 0;
  for (const auto& e : out.log.events()) keep += registry::encode_record(e).size();
  if (keep != bytes.size()) {
    fs::resize_file(log_path(), keep);
    Fd fd(log_path(), O_WRONLY);
    fd.sync();
  }
  return out;
}

}  // namespace frm::gateway
