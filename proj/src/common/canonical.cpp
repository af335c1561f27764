#include "frm/common/canonical.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace frm {

namespace {

// Shortest round-trip digits laid out the way ECMAScript prints numbers:
// plain decimal for exponents in [-7, 21), scientific otherwise.
void write_double(std::string& out, double x) {
  if (!std::isfinite(x)) {
    out += "null";
    return;
  }
  if (x == 0.0) {
    out += '0';
    return;
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
  std::string_view sci(buf, static_cast<std::size_t>(res.ptr - buf));
  if (sci.front() == '-') {
    out += '-';
    sci.remove_prefix(1);
  }
  const auto e = sci.find('e');
  std::string digits;
  for (char c : sci.substr(0, e)) {
    if (c != '.') digits += c;
  }
  int exp10 = 0;
  std::from_chars(sci.data() + e + (sci[e + 1] == '+' ? 2 : 1), sci.data() + sci.size(), exp10);
  const int k = static_cast<int>(digits.size());
  const int n = exp10 + 1;
  if (k <= n && n <= 21) {
    out += digits;
    out.append(static_cast<std::size_t>(n - k), '0');
  } else if (0 < n && n <= 21) {
    out += digits.substr(0, n);
    out += '.';
    out += digits.substr(n);
  } else if (-6 < n && n <= 0) {
    out += "0.";
    out.append(static_cast<std::size_t>(-n), '0');
    out += digits;
  } else {
    out += digits[0];
    if (k > 1) {
      out += '.';
      out += digits.substr(1);
    }
    out += 'e';
    out += n - 1 < 0 ? '-' : '+';
    out += std::to_string(std::abs(n - 1));
  }
}

void write(std::string& out, const Json& v) {
  switch (v.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, child] : v.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(key).dump(-1, ' ', false, Json::error_handler_t::strict);
        out += ':';
        write(out, child);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ',';
        write(out, v[i]);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      write_double(out, v.get<double>());
      break;
    default:
      out += v.dump(-1, ' ', false, Json::error_handler_t::strict);
  }
}

}  // namespace

std::string canonical_dump(const Json& value) {
  // Objects are std::map backed, so keys come out in byte order.
  std::string out;
  write(out, value);
  return out;
}

Json canonical_parse(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("$: ") + e.what());
  }
}

void schema_error(const std::string& path, std::string_view what) {
  throw Error(ErrorCode::SchemaViolation, path + ": " + std::string(what));
}

ObjectReader::ObjectReader(const Json& object, std::string path)
    : object_(object), path_(std::move(path)) {
  if (!object_.is_object()) schema_error(path_.empty() ? "$" : path_, "expected object");
}

bool ObjectReader::has(std::string_view key) const {
  return object_.find(key) != object_.end();
}

std::string ObjectReader::child_path(std::string_view key) const {
  return path_ + "." + std::string(key);
}

std::string ObjectReader::index_path(std::string_view key, std::size_t i) const {
  return child_path(key) + "[" + std::to_string(i) + "]";
}

const Json& ObjectReader::at(std::string_view key) {
  const Json* v = find(key);
  if (v == nullptr) schema_error(child_path(key), "missing required field");
  return *v;
}

const Json* ObjectReader::find(std::string_view key) {
  auto it = object_.find(key);
  if (it == object_.end()) return nullptr;
  seen_.emplace(key);
  return &*it;
}

std::string ObjectReader::str(std::string_view key) {
  const Json& v = at(key);
  if (!v.is_string()) schema_error(child_path(key), "expected string");
  return v.get<std::string>();
}

double ObjectReader::num(std::string_view key) {
  const Json& v = at(key);
  if (!v.is_number()) schema_error(child_path(key), "expected number");
  return v.get<double>();
}

std::int64_t ObjectReader::integer(std::string_view key) {
  const Json& v = at(key);
  if (!v.is_number_integer()) schema_error(child_path(key), "expected integer");
  return v.get<std::int64_t>();
}

bool ObjectReader::boolean(std::string_view key) {
  const Json& v = at(key);
  if (!v.is_boolean()) schema_error(child_path(key), "expected boolean");
  return v.get<bool>();
}

Timestamp ObjectReader::time(std::string_view key) {
  const std::string text = str(key);
  try {
    return parse_timestamp(text);
  } catch (const Error&) {
    schema_error(child_path(key), "expected timestamp YYYY-MM-DDTHH:MM:SSZ");
  }
}

std::optional<std::string> ObjectReader::opt_str(std::string_view key) {
  if (!has(key) || object_.at(std::string(key)).is_null()) {
    find(key);
    return std::nullopt;
  }
  return str(key);
}

std::optional<double> ObjectReader::opt_num(std::string_view key) {
  if (!has(key) || object_.at(std::string(key)).is_null()) {
    find(key);
    return std::nullopt;
  }
  return num(key);
}

std::optional<Timestamp> ObjectReader::opt_time(std::string_view key) {
  if (!has(key) || object_.at(std::string(key)).is_null()) {
    find(key);
    return std::nullopt;
  }
  return time(key);
}

std::vector<std::string> ObjectReader::str_list(std::string_view key) {
  const Json& v = at(key);
  if (!v.is_array()) schema_error(child_path(key), "expected array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) schema_error(index_path(key, i), "expected string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

std::vector<std::string> ObjectReader::opt_str_list(std::string_view key) {
  if (!has(key)) return {};
  return str_list(key);
}

Json ObjectReader::rest() const {
  Json out = Json::object();
  for (auto it = object_.begin(); it != object_.end(); ++it) {
    if (seen_.find(it.key()) == seen_.end()) out[it.key()] = it.value();
  }
  return out;
}

void merge_extra(Json& out, const Json& extra) {
  if (!extra.is_object()) return;
  for (auto it = extra.begin(); it != extra.end(); ++it) {
    if (!out.contains(it.key())) out[it.key()] = it.value();
  }
}

}  // namespace frm
