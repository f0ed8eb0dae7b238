#include "config.hpp"

#include <bellkit/errors.hpp>
#include <bellkit/format.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

namespace bellkit::cli {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::string source)
      : entries_(std::move(entries)), source_(std::move(source)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(source_ + ": " + key + ": " + why);
    throw ConfigError(source_ + ":" + std::to_string(it->second.line) + ": " + key + ": " + why);
  }

  std::optional<double> number(const std::string& key, const std::function<bool(double)>& ok,
                               const char* constraint) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    double v = 0.0;
    try {
      v = parse_number(it->second.value, key);
    } catch (const InputError&) {
      fail(key, "expected a finite number, got '" + it->second.value + "'");
    }
    if (!ok(v)) fail(key, std::string("must be ") + constraint);
    return v;
  }

  std::optional<std::int64_t> integer(const std::string& key, std::int64_t min) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    std::int64_t v = 0;
    try {
      v = parse_integer(it->second.value, key);
    } catch (const InputError&) {
      fail(key, "expected an integer, got '" + it->second.value + "'");
    }
    if (v < min) fail(key, "must be >= " + std::to_string(min));
    return v;
  }

  std::optional<std::uint64_t> unsigned64(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    const auto& s = it->second.value;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
      fail(key, "expected an unsigned 64-bit integer, got '" + s + "'");
    return v;
  }

  std::optional<std::string> text(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
  }

 private:
  std::map<std::string, Entry> entries_;
  std::string source_;
};

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k = {
        "f_mag", "f_phase_deg", "coherence", "mode", "background_fraction",
        "theta1_deg", "theta2_deg", "theta1p_deg", "theta2p_deg",
        "eta_min", "eta_max", "eta_steps", "f_min", "f_max", "f_steps",
        "pair_rate", "duration_s", "coincidence_window_s", "seed", "replicas",
        "subtract_accidentals", "out_dir", "format"};
    for (const std::string base : {"eps_par", "eps_perp", "efficiency", "background_rate"}) {
      k.push_back(base);
      k.push_back(base + "_1");
      k.push_back(base + "_2");
    }
    return k;
  }();
  return keys;
}

bool is_known(const std::string& key) {
  for (const auto& k : known_keys())
    if (k == key) return true;
  return false;
}

bool unit_interval(double v) { return v >= 0.0 && v <= 1.0; }
bool nonnegative(double v) { return v >= 0.0; }
bool positive(double v) { return v > 0.0; }

void read_arm(const Reader& r, int which, MeasurementArm& arm) {
  const std::string suffix = "_" + std::to_string(which);
  auto pick = [&](const std::string& base, const std::function<bool(double)>& ok, const char* constraint,
                  double& target) {
    if (auto v = r.number(base, ok, constraint)) target = *v;
    if (auto v = r.number(base + suffix, ok, constraint)) target = *v;
  };
  pick("eps_par", unit_interval, "in [0, 1]", arm.polarizer.eps_par);
  pick("eps_perp", unit_interval, "in [0, 1]", arm.polarizer.eps_perp);
  pick("efficiency", unit_interval, "in [0, 1]", arm.detector.efficiency);
  pick("background_rate", nonnegative, ">= 0", arm.detector.background_rate);
  if (arm.polarizer.eps_perp > arm.polarizer.eps_par) {
    const std::string key = r.has("eps_perp" + suffix) ? "eps_perp" + suffix : "eps_perp";
    r.fail(key, "must not exceed eps_par (arm " + std::to_string(which) + ")");
  }
}

}  // namespace

ChMode parse_mode(const std::string& text) {
  if (text == "heralded") return ChMode::heralded;
  if (text == "strict") return ChMode::strict;
  throw ConfigError("mode: expected heralded or strict, got '" + text + "'");
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ConfigError("format: expected csv or json, got '" + text + "'");
}

EntangledState CliConfig::state() const {
  if (!f_mag) throw ConfigError("missing required key 'f_mag'");
  return {*f_mag, f_phase_deg * std::numbers::pi / 180.0, coherence};
}

RunConfig CliConfig::run_config(const AngleSettings& settings) const {
  if (!pair_rate) throw ConfigError("missing required key 'pair_rate'");
  if (!duration_s) throw ConfigError("missing required key 'duration_s'");
  RunConfig c;
  c.pair_rate = *pair_rate;
  c.duration_s = *duration_s;
  c.coincidence_window_s = coincidence_window_s;
  c.seed = seed;
  c.state = state();
  c.arm1 = arm1;
  c.arm2 = arm2;
  c.settings = settings;
  return c;
}

CliConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!is_known(key)) throw ConfigError(where + ": " + key + ": unknown key");
    if (value.empty()) throw ConfigError(where + ": " + key + ": empty value");
    if (entries.count(key))
      throw ConfigError(where + ": " + key + ": repeated (first set on line " +
                        std::to_string(entries[key].line) + ")");
    entries[key] = {value, line_no};
  }

  const Reader r(std::move(entries), source);
  CliConfig c;
  auto finite = [](double v) { return std::isfinite(v); };

  c.f_mag = r.number("f_mag", nonnegative, ">= 0");
  if (auto v = r.number("f_phase_deg", finite, "finite")) c.f_phase_deg = *v;
  if (auto v = r.number("coherence", unit_interval, "in [0, 1]")) c.coherence = *v;
  if (auto v = r.text("mode")) {
    try {
      c.mode = parse_mode(*v);
    } catch (const ConfigError&) {
      r.fail("mode", "expected heralded or strict, got '" + *v + "'");
    }
  }
  if (auto v = r.number("background_fraction", [](double b) { return b >= 0.0 && b < 1.0; }, "in [0, 1)"))
    c.background_fraction = *v;

  read_arm(r, 1, c.arm1);
  read_arm(r, 2, c.arm2);

  const char* angle_keys[] = {"theta1_deg", "theta2_deg", "theta1p_deg", "theta2p_deg"};
  int given = 0;
  std::array<double, 4> deg{};
  for (int i = 0; i < 4; ++i) {
    if (auto v = r.number(angle_keys[i], finite, "finite")) {
      deg[i] = *v;
      ++given;
    }
  }
  if (given != 0 && given != 4) {
    for (const char* k : angle_keys)
      if (!r.has(k)) r.fail(k, "missing; give all four angles or none");
  }
  if (given == 4) c.angles = AngleSettings::from_degrees(deg[0], deg[1], deg[2], deg[3]);

  if (auto v = r.number("eta_min", unit_interval, "in [0, 1]")) c.grid.eta_min = *v;
  if (auto v = r.number("eta_max", unit_interval, "in [0, 1]")) c.grid.eta_max = *v;
  if (auto v = r.integer("eta_steps", 2)) c.grid.eta_steps = static_cast<int>(*v);
  if (auto v = r.number("f_min", nonnegative, ">= 0")) c.grid.f_min = *v;
  if (auto v = r.number("f_max", nonnegative, ">= 0")) c.grid.f_max = *v;
  if (auto v = r.integer("f_steps", 2)) c.grid.f_steps = static_cast<int>(*v);
  if (c.grid.eta_min >= c.grid.eta_max) r.fail(r.has("eta_min") ? "eta_min" : "eta_max", "must be < eta_max");
  if (c.grid.f_min >= c.grid.f_max) r.fail(r.has("f_min") ? "f_min" : "f_max", "must be < f_max");
  if (c.grid.eta_steps > 100000 || c.grid.f_steps > 100000)
    r.fail(c.grid.eta_steps > 100000 ? "eta_steps" : "f_steps", "must be <= 100000");

  c.pair_rate = r.number("pair_rate", nonnegative, ">= 0");
  c.duration_s = r.number("duration_s", positive, "> 0");
  if (auto v = r.number("coincidence_window_s", positive, "> 0")) c.coincidence_window_s = *v;
  if (auto v = r.unsigned64("seed")) c.seed = *v;
  if (auto v = r.integer("replicas", 1)) {
    if (*v > 1000000) r.fail("replicas", "must be <= 1000000");
    c.replicas = static_cast<int>(*v);
  }
  if (auto v = r.text("subtract_accidentals")) {
    if (*v == "true") c.subtract_accidentals = true;
    else if (*v == "false") c.subtract_accidentals = false;
    else r.fail("subtract_accidentals", "expected true or false, got '" + *v + "'");
  }
  if (auto v = r.text("out_dir")) c.out_dir = *v;
  if (auto v = r.text("format")) {
    try {
      c.format = parse_format(*v);
    } catch (const ConfigError&) {
      r.fail("format", "expected csv or json, got '" + *v + "'");
    }
  }
  return c;
}

CliConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse_config(in, path);
}

}  // namespace bellkit::cli
