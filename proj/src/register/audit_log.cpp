#include "frm/register/audit_log.hpp"

#include <openssl/evp.h>

#include <memory>

#include "frm/common/error.hpp"

namespace frm::registry {
namespace {

constexpr std::size_t kMaxRecordBytes = 64u << 20;

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

Json event_json(const AuditEvent& e) {
  return Json{{"seq", e.seq},
              {"timestamp", format_timestamp(e.timestamp)},
              {"payload", canonical_parse(e.payload)},
              {"prev_hash", to_hex(e.prev_hash)},
              {"hash", to_hex(e.hash)}};
}

AuditEvent event_from_json(const Json& j) {
  ObjectReader r(j, "$");
  AuditEvent e;
  e.seq = static_cast<std::uint64_t>(r.integer("seq"));
  e.timestamp = r.time("timestamp");
  const Json& payload = r.at("payload");
  if (!payload.is_object()) schema_error("$.payload", "expected object");
  e.payload = canonical_dump(payload);
  e.prev_hash = digest_from_hex(r.str("prev_hash"));
  e.hash = digest_from_hex(r.str("hash"));
  if (!r.rest().empty()) schema_error("$", "unexpected fields in audit record");
  return e;
}

}  // namespace

Digest sha256(std::string_view bytes) {
  Digest out{};
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != out.size()) {
    throw Error(ErrorCode::Io, "SHA-256 failed");
  }
  return out;
}

std::string to_hex(const Digest& d) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (auto b : d) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

Digest digest_from_hex(std::string_view hex) {
  Digest out{};
  if (hex.size() != 64) throw Error(ErrorCode::SchemaViolation, "hash must be 64 hex digits");
  for (std::size_t i = 0; i < 32; ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::SchemaViolation, "hash must be lowercase hex");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

std::string AuditEvent::actor() const { return canonical_parse(payload).at("actor").get<std::string>(); }
AuditKind AuditEvent::kind() const {
  return parse_audit_kind(canonical_parse(payload).at("kind").get<std::string>());
}
Json AuditEvent::body() const { return canonical_parse(payload).at("body"); }

std::string make_payload(const std::string& actor, AuditKind kind, const Json& body) {
  return canonical_dump(Json{{"actor", actor}, {"kind", to_string(kind)}, {"body", body}});
}

Digest compute_hash(const Digest& prev, std::string_view payload, std::uint64_t seq, Timestamp ts) {
  std::string buf;
  buf.reserve(prev.size() + payload.size() + 8 + 20);
  buf.append(reinterpret_cast<const char*>(prev.data()), prev.size());
  buf.append(payload);
  for (int shift = 56; shift >= 0; shift -= 8) {
    buf.push_back(static_cast<char>((seq >> shift) & 0xFF));
  }
  buf.append(format_timestamp(ts));
  return sha256(buf);
}

VerifyResult verify_chain(std::span<const AuditEvent> events) {
  Digest prev = kGenesisHash;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const AuditEvent& e = events[i];
    std::string reason;
    if (e.seq != i) {
      reason = "sequence number out of order";
    } else if (e.prev_hash != prev) {
      reason = "prev_hash does not match the preceding event";
    } else if (e.hash != compute_hash(e.prev_hash, e.payload, e.seq, e.timestamp)) {
      reason = "hash does not match event contents";
    }
    if (!reason.empty()) return VerifyResult{false, i, reason};
    prev = e.hash;
  }
  return {};
}

AuditLog::AuditLog(std::vector<AuditEvent> events) : events_(std::move(events)) {
  const auto result = verify_chain(events_);
  if (!result.ok) {
    throw Error(ErrorCode::ChainBroken, std::to_string(*result.first_bad_seq) + ": " + result.reason);
  }
}

AuditEvent AuditLog::next_event(const std::string& actor, AuditKind kind, const Json& body,
                                Timestamp ts) const {
  AuditEvent e;
  e.seq = events_.size();
  e.timestamp = ts;
  e.payload = make_payload(actor, kind, body);
  e.prev_hash = head();
  e.hash = compute_hash(e.prev_hash, e.payload, e.seq, e.timestamp);
  return e;
}

const AuditEvent& AuditLog::append(const std::string& actor, AuditKind kind, const Json& body,
                                   Timestamp ts) {
  events_.push_back(next_event(actor, kind, body, ts));
  return events_.back();
}

std::string encode_record(const AuditEvent& event) {
  const std::string json = canonical_dump(event_json(event));
  std::string out;
  const auto n = static_cast<std::uint32_t>(json.size());
  out.push_back(static_cast<char>(n >> 24));
  out.push_back(static_cast<char>(n >> 16));
  out.push_back(static_cast<char>(n >> 8));
  out.push_back(static_cast<char>(n));
  out += json;
  return out;
}

DecodedLog decode_log(std::string_view bytes) {
  DecodedLog out;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 4) {
      out.torn_tail = true;
      break;
    }
    const auto b = [&](std::size_t i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + i])); };
    const std::size_t n = b(0) << 24 | b(1) << 16 | b(2) << 8 | b(3);
    if (n == 0 || n > kMaxRecordBytes) {
      out.bad_record = out.events.size();
      break;
    }
    if (bytes.size() - pos - 4 < n) {
      out.torn_tail = true;
      break;
    }
    const std::string_view json = bytes.substr(pos + 4, n);
    try {
      AuditEvent e = event_from_json(canonical_parse(json));
      if (canonical_dump(event_json(e)) != json) {
        out.bad_record = out.events.size();
        break;
      }
      out.events.push_back(std::move(e));
    } catch (const std::exception&) {
      out.bad_record = out.events.size();
      break;
    }
    pos += 4 + n;
    out.complete_bytes = pos;
  }
  return out;
}

VerifyResult verify_log_bytes(std::string_view bytes) {
  const DecodedLog decoded = decode_log(bytes);
  VerifyResult chain = verify_chain(decoded.events);
  if (!chain.ok) return chain;
  if (decoded.bad_record) return {false, decoded.bad_record, "record does not decode to a canonical event"};
  if (decoded.torn_tail) {
    return {false, decoded.events.size(), "record truncated or length prefix corrupted"};
  }
  return {};
}

}  // namespace frm::registry
