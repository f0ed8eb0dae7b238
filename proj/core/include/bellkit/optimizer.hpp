// optimizer.hpp
// Global maximisation of the CH sum over the four analyser angles.
//
// Strategy: exhaustive coarse grid over [0, pi)^4, then simplex refinement
// from the best few grid cells. The CH landscape has reflection-equivalent
// optima (theta -> pi - theta on all angles) and, for many states, a
// continuous family of equal optima; results are canonicalised so that the
// same inputs always report the same representative.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bellkit/inequality.hpp"

namespace bellkit {

struct OptimOptions {
  double grid_step_deg = 2.0;
  int starts = 5;                  // simplex refinements launched from the best grid cells
  double simplex_tolerance = 1e-7; // rad
  long max_evaluations = 10000;    // per refinement
  // Prefer a representative with theta2' = 0 when one attains the optimum,
  // then the lexicographically smaller of the settings and their reflection.
  bool canonicalize = true;
  double background_fraction = 0.0;
};

struct OptimResult {
  AngleSettings settings;
  double ch = 0.0;
  std::optional<double> ratio;
  ChMode mode = ChMode::heralded;
  bool converged = false;
  long evaluations = 0;
  double grid_best = 0.0;      // best CH on the coarse grid
  bool pinned_family = false;  // the theta2' = 0 representative was adopted
};

OptimResult optimize_angles(const ChObjective& objective, const OptimOptions& options = {});

OptimResult optimize_angles(const EntangledState& state, const MeasurementArm& arm1,
                            const MeasurementArm& arm2, ChMode mode,
                            const OptimOptions& options = {});

struct PhasePoint {
  double phase = 0.0;
  OptimResult result;
};

// Re-optimises the angles for each phase of f, keeping |f| and coherence
// from `state`. Throws InputError on an empty phase list.
std::vector<PhasePoint> phase_sweep(const EntangledState& state, const MeasurementArm& arm1,
                                    const MeasurementArm& arm2, std::span<const double> phases,
                                    ChMode mode, const OptimOptions& options = {});

}  // namespace bellkit
