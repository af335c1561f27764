#pragma once

#include <json.hpp>

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "frm/common/error.hpp"
#include "frm/common/time.hpp"

namespace frm {

using Json = nlohmann::json;

// Canonical bytes: UTF-8, object keys in byte-lexicographic order, no
// insignificant whitespace, numbers in shortest round-trip form.
std::string canonical_dump(const Json& value);
Json canonical_parse(std::string_view text);

// Walks one JSON object while recording the path for error messages and the
// keys it consumed, so that unknown keys can be kept for round-tripping.
class ObjectReader {
 public:
  ObjectReader(const Json& object, std::string path);

  const std::string& path() const { return path_; }
  bool has(std::string_view key) const;

  // Required field; throws SchemaViolation naming "<path>.<key>".
  const Json& at(std::string_view key);
  const Json* find(std::string_view key);

  std::string str(std::string_view key);
  double num(std::string_view key);
  std::int64_t integer(std::string_view key);
  bool boolean(std::string_view key);
  Timestamp time(std::string_view key);

  std::optional<std::string> opt_str(std::string_view key);
  std::optional<double> opt_num(std::string_view key);
  std::optional<Timestamp> opt_time(std::string_view key);
  std::vector<std::string> str_list(std::string_view key);
  std::vector<std::string> opt_str_list(std::string_view key);

  std::string child_path(std::string_view key) const;
  std::string index_path(std::string_view key, std::size_t i) const;

  // Everything not consumed so far, as an object (empty object if none).
  Json rest() const;

 private:
  const Json& object_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

[[noreturn]] void schema_error(const std::string& path, std::string_view what);

// Writes `extra` keys into `out` without overwriting known keys.
void merge_extra(Json& out, const Json& extra);

}  // namespace frm
