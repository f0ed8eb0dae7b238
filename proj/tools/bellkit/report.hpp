#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace bellkit::cli {

// Flat ordered key/value report. Every number is rendered once as text and
// the JSON value is parsed back from that text, so both formats agree.
class Report {
 public:
  Report& number(const std::string& key, double value);
  Report& number(const std::string& key, const std::optional<double>& value);  // null when empty
  Report& integer(const std::string& key, std::int64_t value);
  Report& unsigned_integer(const std::string& key, std::uint64_t value);
  Report& fixed2(const std::string& key, double value);
  Report& text(const std::string& key, const std::string& value);
  Report& flag(const std::string& key, bool value);

  std::string render(OutputFormat format) const;

 private:
  struct Item {
    std::string key;
    std::string text;
    nlohmann::ordered_json value;
  };
  std::vector<Item> items_;
};

}  // namespace bellkit::cli
