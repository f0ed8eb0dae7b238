// loophole_map.hpp
// Detection-efficiency requirements for a loophole-free CH test: the map of
// CH/N over (eta, f), its contour lines, and critical efficiencies.
//
// Everything here uses strict-mode CH (true singles in the last two terms),
// real f, full coherence, and the same efficiency and polariser on both
// arms. N is the total single-detection probability with the polarisers
// removed, 2*eta per pair, so CH/N is settings independent in its
// denominator and its zero level is the loophole-free boundary.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bellkit/contour.hpp"
#include "bellkit/optimizer.hpp"
#include "bellkit/quantum_model.hpp"

namespace bellkit {

inline constexpr std::array<double, 5> kContourLevels = {0.0, 0.01, 0.1, 0.15, 0.2};

struct GridSpec {
  double eta_min = 0.5;
  double eta_max = 1.0;
  int eta_steps = 100;
  double f_min = 0.01;
  double f_max = 1.0;
  int f_steps = 100;
  PolarizerChannel polarizer;

  void validate() const;  // throws InputError
  [[nodiscard]] double eta_at(int i) const;
  [[nodiscard]] double f_at(int j) const;
};

// Maximised strict CH over angles divided by N = 2*eta.
double ch_over_n(double f, double eta, const PolarizerChannel& polarizer,
                 const OptimOptions& options = {});

struct ContourLine {
  double level = 0.0;
  Polyline line;  // x = eta, y = f
};

struct LoopholeMap {
  GridSpec spec;
  std::vector<double> values;  // row-major: values[f_index * eta_steps + eta_index]
  std::vector<ContourLine> contours;

  [[nodiscard]] double value(int f_index, int eta_index) const {
    return values[static_cast<std::size_t>(f_index) * spec.eta_steps + eta_index];
  }
  // Smallest eta on row f_index where CH/N turns positive, linearly
  // interpolated between nodes; empty when the row never turns positive.
  [[nodiscard]] std::optional<double> zero_crossing_eta(int f_index) const;
};

LoopholeMap grid_map(const GridSpec& spec, unsigned threads);
LoopholeMap grid_map(const GridSpec& spec);

// CSV writers: "f,eta,ch_over_n" and "level,poly_id,f,eta".
std::string map_csv(const LoopholeMap& map);
std::string contours_csv(const LoopholeMap& map);

// Smallest efficiency (bisection to `tolerance`) at which the state still
// violates strict CH; empty when there is no violation even at eta = 1.
std::optional<double> efficiency_threshold(const EntangledState& state,
                                           const PolarizerChannel& polarizer,
                                           double tolerance = 1e-4);

struct ThresholdCurve {
  std::vector<std::pair<double, double>> points;  // (f, eta_crit), sorted by f
  double tolerance = 1e-4;
};

// f values without a threshold are skipped.
ThresholdCurve threshold_curve(std::span<const double> f_values, const PolarizerChannel& polarizer,
                               double tolerance = 1e-4);

struct BackgroundComparison {
  double background_fraction = 0.0;
  double eta = 0.0;
  double equivalent_eta = 0.0;          // eta * (1 - b)
  AngleSettings settings;                // optimum with background
  double ch_with_background = 0.0;
  double ch_at_equivalent_eta = 0.0;
  double ch_without_background = 0.0;
  std::optional<double> ratio_with_background;
  std::optional<double> ratio_at_equivalent_eta;
  double ratio_difference = 0.0;         // |R_b - R_eq|, 0 when either is undefined
  bool ch_decreased = false;             // ch_with_background < ch_without_background (b > 0)
};

// Background fraction b of the single-arm terms versus an efficiency reduced
// to eta*(1-b) without background, each optimised separately.
BackgroundComparison background_equivalence_check(double f, double eta, double background_fraction,
                                                  const PolarizerChannel& polarizer = {});

}  // namespace bellkit
