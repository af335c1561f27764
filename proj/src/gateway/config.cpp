#include "frm/gateway/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "frm/common/error.hpp"
#include "frm/register/codec.hpp"

namespace frm::gateway {
namespace {

double ranged(ObjectReader& r, std::string_view key, double fallback, double lo, double hi,
              bool lo_open) {
  if (!r.has(key)) return fallback;
  const double v = r.num(key);
  const bool above = lo_open ? v > lo : v >= lo;
  if (!std::isfinite(v) || !above || v > hi) {
    schema_error(r.child_path(key), "must be in " + std::string(lo_open ? "(" : "[") +
                                        canonical_dump(Json(lo)) + ", " + canonical_dump(Json(hi)) + "]");
  }
  return v;
}

void reject_unknown(const ObjectReader& r) {
  const Json rest = r.rest();
  if (!rest.empty()) schema_error(r.child_path(rest.begin().key()), "unknown key");
}

}  // namespace

registry::Settings Config::settings() const { return registry::Settings{enhancement_margin, governance}; }

Config decode_config(const Json& j) {
  ObjectReader r(j, "");
  Config c;
  if (const Json* sched = r.find("schedule")) {
    ObjectReader s(*sched, r.child_path("schedule"));
    c.compute_growth_factor = ranged(s, "compute_growth_factor", c.compute_growth_factor, 1.0, 1000.0, true);
    c.max_interval_days = ranged(s, "max_interval_days", c.max_interval_days, 1.0, 3650.0, false);
    reject_unknown(s);
  }
  c.enhancement_margin = ranged(r, "enhancement_margin", 0.0, 0.0, 1e6, false);
  if (const Json* g = r.find("governance")) {
    c.governance = registry::decode_governance(*g, r.child_path("governance"));
  }
  c.store_path = r.opt_str("store_path").value_or("");
  reject_unknown(r);
  return c;
}

Json encode_config(const Config& c) {
  Json out{{"schedule", Json{{"compute_growth_factor", c.compute_growth_factor},
                             {"max_interval_days", c.max_interval_days}}},
           {"enhancement_margin", c.enhancement_margin},
           {"governance", registry::encode(c.governance)}};
  if (!c.store_path.empty()) out["store_path"] = c.store_path;
  return out;
}

Config load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_config(canonical_parse(buf.str()));
}

}  // namespace frm::gateway
