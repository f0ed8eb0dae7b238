// montecarlo.hpp
// Counting-experiment simulator. Each of the six CH configurations is run for
// `duration_s` and yields Poisson-distributed aggregate counts:
//
//   true coincidences ~ Poisson(rate * T * p_cc)
//   singles_i         ~ Poisson(rate * T * p_i + background_i * T)
//   accidentals       ~ Poisson(S1 * S2 * tau / T), S_i the expected singles
//
// Reported coincidences are true + accidental. Background reaches the
// coincidences only through the accidental term.
//
// Reproducibility: configuration k draws from its own mt19937_64 stream seeded
// by a splitmix64 hash of (seed, k), so results do not depend on the order
// configurations or replicas are evaluated in.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bellkit/counts.hpp"
#include "bellkit/inequality.hpp"
#include "bellkit/quantum_model.hpp"

namespace bellkit {

struct RunConfig {
  double pair_rate = 0.0;               // produced pairs per second, >= 0
  double duration_s = 1.0;              // per configuration, > 0
  double coincidence_window_s = 1e-9;   // tau, > 0
  std::uint64_t seed = 0;
  EntangledState state;
  MeasurementArm arm1;
  MeasurementArm arm2;
  AngleSettings settings;

  void validate() const;  // throws InputError
};

struct ExpectedConfigCounts {
  double true_coincidences = 0.0;
  double accidentals = 0.0;
  double singles1 = 0.0;
  double singles2 = 0.0;
};

std::array<ExpectedConfigCounts, kConfigCount> expected_counts(const RunConfig& config);

// Mean CH in counts, accidentals included.
double expected_ch_counts(const RunConfig& config);

CountRecord simulate_run(const RunConfig& config);

struct ReplicateSummary {
  int replicas = 0;
  std::vector<double> ch;        // per replica, counts
  std::vector<double> sigma_ch;  // propagated, per replica (0 when undefined)
  std::vector<double> z_scores;
  double mean_ch = 0.0;
  double empirical_sigma_ch = 0.0;
  double mean_propagated_sigma_ch = 0.0;
  double mean_ch_rate = 0.0;
  double empirical_sigma_ch_rate = 0.0;
  int ratio_defined = 0;
  double mean_ratio = 0.0;
  double empirical_sigma_ratio = 0.0;
  double mean_propagated_sigma_ratio = 0.0;
  bool wide_uncertainty = false;  // too few replicas for a stable sigma estimate
};

// Replica k uses seed + k. Throws InputError when replicas < 2.
ReplicateSummary replicate_study(const RunConfig& config, int replicas, unsigned threads = 1);

}  // namespace bellkit
