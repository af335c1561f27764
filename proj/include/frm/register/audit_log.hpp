#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frm/common/audit_record.hpp"
#include "frm/common/time.hpp"

namespace frm::registry {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::string_view bytes);
std::string to_hex(const Digest& d);
Digest digest_from_hex(std::string_view hex);  // throws SchemaViolation

inline constexpr Digest kGenesisHash{};

// One link of the audit chain. `payload` holds the canonical bytes of
// {"actor", "body", "kind"}, so the actor and kind are covered by the hash:
//   hash = SHA-256(prev_hash || payload || seq as 8 bytes big-endian || timestamp text)
struct AuditEvent {
  std::uint64_t seq = 0;
  Timestamp timestamp;
  std::string payload;
  Digest prev_hash{};
  Digest hash{};

  std::string actor() const;
  AuditKind kind() const;
  Json body() const;

  bool operator==(const AuditEvent&) const = default;
};

std::string make_payload(const std::string& actor, AuditKind kind, const Json& body);
Digest compute_hash(const Digest& prev, std::string_view payload, std::uint64_t seq, Timestamp ts);

struct VerifyResult {
  bool ok = true;
  std::optional<std::uint64_t> first_bad_seq;
  std::string reason;
};

// Recomputes every link: seq must equal the position, prev_hash the previous
// hash (32 zero bytes at genesis) and hash the recomputed digest.
VerifyResult verify_chain(std::span<const AuditEvent> events);

// In-memory chain; appends are the only mutation.
class AuditLog {
 public:
  AuditLog() = default;
  // Adopts already-verified events; throws ChainBroken otherwise.
  explicit AuditLog(std::vector<AuditEvent> events);

  const AuditEvent& append(const std::string& actor, AuditKind kind, const Json& body, Timestamp ts);
  // The event append() would produce, without storing it.
  AuditEvent next_event(const std::string& actor, AuditKind kind, const Json& body,
                        Timestamp ts) const;

  const std::vector<AuditEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  Digest head() const { return events_.empty() ? kGenesisHash : events_.back().hash; }

 private:
  std::vector<AuditEvent> events_;
};

// File framing: each record is a 4-byte big-endian length followed by the
// canonical JSON of the event
// {"hash", "payload", "prev_hash", "seq", "timestamp"} with hashes in hex.
std::string encode_record(const AuditEvent& event);

struct DecodedLog {
  std::vector<AuditEvent> events;
  std::size_t complete_bytes = 0;  // bytes covered by `events`
  bool torn_tail = false;          // trailing bytes shorter than their declared record
  // Index of the first record that is complete but does not decode to a
  // canonical event.
  std::optional<std::uint64_t> bad_record;
};

DecodedLog decode_log(std::string_view bytes);

// Verifies a log file image: framing, canonical encoding and the chain.
VerifyResult verify_log_bytes(std::string_view bytes);

}  // namespace frm::registry
