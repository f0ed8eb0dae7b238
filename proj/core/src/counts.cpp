#include "bellkit/counts.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "bellkit/errors.hpp"
#include "bellkit/format.hpp"

namespace bellkit {

namespace {

constexpr std::string_view kHeader = "config_label,coincidences,singles1,singles2,accidentals,duration_s";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

const ConfigCounts& CountRecord::at(std::string_view label) const {
  const ConfigCounts* found = nullptr;
  for (const auto& c : configs) {
    if (c.label != label) continue;
    if (found) throw InputError("duplicate configuration '" + std::string(label) + "'");
    found = &c;
  }
  if (!found) throw InputError("missing configuration '" + std::string(label) + "'");
  return *found;
}

void write_count_csv(std::ostream& out, const CountRecord& record) {
  out << kHeader << '\n';
  for (const auto& c : record.configs) {
    out << c.label << ',' << c.coincidences << ',' << c.singles1 << ',' << c.singles2 << ','
        << format_number(c.accidentals) << ',' << format_number(c.duration_s) << '\n';
  }
}

std::string count_csv(const CountRecord& record) {
  std::ostringstream out;
  write_count_csv(out, record);
  return out.str();
}

CountRecord read_count_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("count CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw InputError("count CSV: unexpected header '" + line + "'");

  CountRecord record;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    const std::string where = "count CSV line " + std::to_string(line_no);
    if (fields.size() != 6) throw InputError(where + ": expected 6 fields");
    ConfigCounts c;
    c.label = std::string(fields[0]);
    if (std::find(kConfigLabels.begin(), kConfigLabels.end(), c.label) == kConfigLabels.end()) {
      throw InputError(where + ": unknown configuration '" + c.label + "'");
    }
    c.coincidences = parse_integer(fields[1], where + " coincidences");
    c.singles1 = parse_integer(fields[2], where + " singles1");
    c.singles2 = parse_integer(fields[3], where + " singles2");
    c.accidentals = parse_number(fields[4], where + " accidentals");
    c.duration_s = parse_number(fields[5], where + " duration_s");
    if (c.coincidences < 0 || c.singles1 < 0 || c.singles2 < 0 || c.accidentals < 0.0) {
      throw InputError(where + ": counts must be nonnegative");
    }
    record.configs.push_back(std::move(c));
  }
  return record;
}

}  // namespace bellkit
