#include "report.hpp"

#include <bellkit/format.hpp>

#include <charconv>
#include <cmath>

namespace bellkit::cli {

Report& Report::number(const std::string& key, double value) {
  const auto s = format_number(value);
  items_.push_back({key, s, nlohmann::ordered_json::parse(s)});
  return *this;
}

Report& Report::number(const std::string& key, const std::optional<double>& value) {
  if (value) return number(key, *value);
  items_.push_back({key, "undefined", nullptr});
  return *this;
}

Report& Report::integer(const std::string& key, std::int64_t value) {
  items_.push_back({key, format_number(value), value});
  return *this;
}

Report& Report::unsigned_integer(const std::string& key, std::uint64_t value) {
  items_.push_back({key, std::to_string(value), value});
  return *this;
}

Report& Report::fixed2(const std::string& key, double value) {
  if (std::abs(value) < 0.005) value = 0.0;  // no "-0.00"
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 2);
  const std::string s(buf, r.ptr);
  items_.push_back({key, s, nlohmann::ordered_json::parse(s)});
  return *this;
}

Report& Report::text(const std::string& key, const std::string& value) {
  items_.push_back({key, value, value});
  return *this;
}

Report& Report::flag(const std::string& key, bool value) {
  items_.push_back({key, value ? "true" : "false", value});
  return *this;
}

std::string Report::render(OutputFormat format) const {
  if (format == OutputFormat::json) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& it : items_) j[it.key] = it.value;
    return j.dump(2) + "\n";
  }
  std::string s = "quantity,value\n";
  for (const auto& it : items_) s += it.key + "," + it.text + "\n";
  return s;
}

}  // namespace bellkit::cli
