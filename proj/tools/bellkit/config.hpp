#pragma once

#include <bellkit/inequality.hpp>
#include <bellkit/loophole_map.hpp>
#include <bellkit/montecarlo.hpp>
#include <bellkit/quantum_model.hpp>

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>

namespace bellkit::cli {

// Any problem with the configuration file or the command line. Exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct CliConfig {
  std::optional<double> f_mag;
  double f_phase_deg = 0.0;
  double coherence = 1.0;
  MeasurementArm arm1 = MeasurementArm::ideal();
  MeasurementArm arm2 = MeasurementArm::ideal();
  ChMode mode = ChMode::heralded;
  double background_fraction = 0.0;
  std::optional<AngleSettings> angles;  // radians

  GridSpec grid;

  std::optional<double> pair_rate;
  std::optional<double> duration_s;
  double coincidence_window_s = 1e-9;
  std::uint64_t seed = 0;
  int replicas = 1;
  bool subtract_accidentals = false;

  std::string out_dir = ".";
  OutputFormat format = OutputFormat::csv;

  // Throws ConfigError when f_mag was not given.
  EntangledState state() const;
  RunConfig run_config(const AngleSettings& settings) const;
};

// Flat `key = value` text, one key per line, '#' starts a comment.
// Unknown or repeated keys and out-of-range values are rejected with the
// line number and key in the message.
CliConfig parse_config(std::istream& in, const std::string& source);
CliConfig load_config(const std::string& path);

ChMode parse_mode(const std::string& text);
OutputFormat parse_format(const std::string& text);

}  // namespace bellkit::cli
