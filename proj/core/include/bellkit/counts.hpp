// counts.hpp
// Measured or simulated counts for the six analyser configurations of a
// Clauser-Horne run, plus the CSV schema they are exchanged in:
//
//   config_label,coincidences,singles1,singles2,accidentals,duration_s
//
// Labels, in canonical order: t1t2, t1t2p, t1pt2, t1pt2p, t1p_inf, inf_t2.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bellkit {

enum class Config : std::size_t {
  t1_t2 = 0,    // N(theta1, theta2)
  t1_t2p = 1,   // N(theta1, theta2')
  t1p_t2 = 2,   // N(theta1', theta2)
  t1p_t2p = 3,  // N(theta1', theta2')
  t1p_inf = 4,  // N(theta1', no polariser)
  inf_t2 = 5,   // N(no polariser, theta2)
};

inline constexpr std::size_t kConfigCount = 6;
inline constexpr std::array<std::string_view, kConfigCount> kConfigLabels = {
    "t1t2", "t1t2p", "t1pt2", "t1pt2p", "t1p_inf", "inf_t2"};

// +1 / -1 weight of each configuration in the CH sum.
inline constexpr std::array<int, kConfigCount> kConfigSigns = {+1, -1, +1, +1, -1, -1};

struct ConfigCounts {
  std::string label;
  std::int64_t coincidences = 0;
  std::int64_t singles1 = 0;
  std::int64_t singles2 = 0;
  double accidentals = 0.0;  // estimated accidental coincidences, S1*S2*tau/T
  double duration_s = 0.0;
};

struct CountRecord {
  std::vector<ConfigCounts> configs;

  // Throws InputError when the label is absent or duplicated.
  [[nodiscard]] const ConfigCounts& at(std::string_view label) const;
  [[nodiscard]] const ConfigCounts& at(Config config) const {
    return at(kConfigLabels[static_cast<std::size_t>(config)]);
  }
};

void write_count_csv(std::ostream& out, const CountRecord& record);
std::string count_csv(const CountRecord& record);

// Parses the CSV schema above. Rows may come in any order; throws InputError
// on a bad header, malformed field, negative count or unknown label.
CountRecord read_count_csv(std::istream& in);

}  // namespace bellkit
