#include "bellkit/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bellkit/errors.hpp"
#include "bellkit/nelder_mead.hpp"

namespace bellkit {

namespace {

constexpr double kPi = std::numbers::pi;

struct Candidate {
  std::array<double, 4> angles;
  double ch;
};

// Degrees rounded to 1e-4, used only for deterministic tie-breaking.
std::array<long long, 4> tie_key(const AngleSettings& s) {
  std::array<long long, 4> key{};
  const auto deg = s.degrees();
  for (std::size_t i = 0; i < 4; ++i) key[i] = std::llround(deg[i] * 1e4);
  return key;
}

AngleSettings representative(const AngleSettings& s) {
  const AngleSettings a = s.canonical();
  const AngleSettings b = s.reflected();
  return tie_key(b) < tie_key(a) ? b : a;
}

bool same_value(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Better by value; equal values broken by the smaller canonical angles.
bool better(const Candidate& a, const Candidate& b) {
  if (!same_value(a.ch, b.ch)) return a.ch > b.ch;
  return tie_key(representative(AngleSettings::from_array(a.angles))) <
         tie_key(representative(AngleSettings::from_array(b.angles)));
}

// Coarse grid over [0, pi)^4 with theta2' optionally pinned to 0. For fixed
// (theta1, theta1') the CH sum separates into a theta2 part and a theta2' part,
// so the best (theta2, theta2') per pair is found in O(n) rather than O(n^2);
// the grid maximum is unchanged.
std::vector<Candidate> grid_candidates(const ChObjective& obj, int n, bool pin_theta2p,
                                       std::size_t keep, long& evaluations) {
  const double step = kPi / n;
  std::vector<double> coinc(static_cast<std::size_t>(n) * n);
  std::vector<double> arm1(n), arm2(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) coinc[i * n + j] = obj.coincidence(i * step, j * step);
    arm1[i] = obj.first_arm_term(i * step);
    arm2[i] = obj.second_arm_term(i * step);
  }
  evaluations += static_cast<long>(n) * n + 2L * n;
  const auto N = [&](int i, int j) { return coinc[i * n + j]; };

  std::vector<Candidate> top;
  top.reserve(keep + 1);
  for (int a = 0; a < n; ++a) {
    for (int ap = 0; ap < n; ++ap) {
      int best_b = 0;
      double best_b_val = N(a, 0) + N(ap, 0) - arm2[0];
      for (int b = 1; b < n; ++b) {
        const double v = N(a, b) + N(ap, b) - arm2[b];
        if (v > best_b_val) best_b_val = v, best_b = b;
      }
      int best_bp = 0;
      double best_bp_val = N(ap, 0) - N(a, 0);
      if (!pin_theta2p) {
        for (int bp = 1; bp < n; ++bp) {
          const double v = N(ap, bp) - N(a, bp);
          if (v > best_bp_val) best_bp_val = v, best_bp = bp;
        }
      }
      const Candidate c{{a * step, best_b * step, ap * step, best_bp * step},
                        best_b_val + best_bp_val - arm1[ap]};
      if (top.size() < keep || c.ch > top.back().ch) {
        top.insert(std::upper_bound(top.begin(), top.end(), c,
                                    [](const Candidate& x, const Candidate& y) { return x.ch > y.ch; }),
                   c);
        if (top.size() > keep) top.pop_back();
      }
    }
  }
  return top;
}

struct Refined {
  Candidate best;
  bool converged = false;
};

Refined refine(const ChObjective& obj, const std::vector<Candidate>& starts, bool pin_theta2p,
               double step, const OptimOptions& opt, long& evaluations) {
  Refined out{starts.front(), false};
  bool first = true;
  for (const auto& s : starts) {
    Candidate c;
    bool converged = false;
    if (pin_theta2p) {
      const auto r = nelder_mead_maximize<3>(
          [&](const std::array<double, 3>& x) { return obj({x[0], x[1], x[2], 0.0}); },
          {s.angles[0], s.angles[1], s.angles[2]}, step, opt.simplex_tolerance,
          opt.max_evaluations);
      c = {{r.x[0], r.x[1], r.x[2], 0.0}, r.value};
      converged = r.converged;
      evaluations += r.evaluations;
    } else {
      const auto r = nelder_mead_maximize<4>([&](const std::array<double, 4>& x) { return obj(x); },
                                             s.angles, step, opt.simplex_tolerance,
                                             opt.max_evaluations);
      c = {r.x, r.value};
      converged = r.converged;
      evaluations += r.evaluations;
    }
    if (first || better(c, out.best)) {
      out = {c, converged};
      first = false;
    }
  }
  return out;
}

}  // namespace

OptimResult optimize_angles(const ChObjective& obj, const OptimOptions& opt) {
  if (!(opt.grid_step_deg > 0.0) || opt.starts < 1 || !(opt.simplex_tolerance > 0.0) ||
      opt.max_evaluations < 1) {
    throw InputError("invalid optimizer options");
  }
  const int n = std::max(2, static_cast<int>(std::lround(180.0 / opt.grid_step_deg)));
  const double step = kPi / n;
  const auto keep = static_cast<std::size_t>(opt.starts);

  OptimResult result;
  result.mode = obj.mode();

  const auto free_starts = grid_candidates(obj, n, false, keep, result.evaluations);
  result.grid_best = free_starts.front().ch;
  Refined chosen = refine(obj, free_starts, false, step, opt, result.evaluations);

  if (opt.canonicalize) {
    const auto pinned_starts = grid_candidates(obj, n, true, keep, result.evaluations);
    const Refined pinned = refine(obj, pinned_starts, true, step, opt, result.evaluations);
    const double free_ch = chosen.best.ch;
    const double slack = 1e-9 * std::abs(free_ch) + 1e-15;
    if (pinned.best.ch >= free_ch - slack && pinned.best.ch >= result.grid_best) {
      chosen = pinned;
      result.pinned_family = true;
    }
  }

  AngleSettings settings = AngleSettings::from_array(chosen.best.angles);
  settings = opt.canonicalize ? representative(settings) : settings.canonical();

  const ChBreakdown b = obj.breakdown(settings);
  result.settings = settings;
  result.ch = b.ch;
  result.ratio = b.ratio;
  result.converged = chosen.converged;
  return result;
}

OptimResult optimize_angles(const EntangledState& state, const MeasurementArm& arm1,
                            const MeasurementArm& arm2, ChMode mode, const OptimOptions& options) {
  return optimize_angles(ChObjective(state, arm1, arm2, mode, options.background_fraction),
                         options);
}

std::vector<PhasePoint> phase_sweep(const EntangledState& state, const MeasurementArm& arm1,
                                    const MeasurementArm& arm2, std::span<const double> phases,
                                    ChMode mode, const OptimOptions& options) {
  if (phases.empty()) throw InputError("phase_sweep needs at least one phase");
  std::vector<PhasePoint> out;
  out.reserve(phases.size());
  for (double phase : phases) {
    EntangledState s = state;
    s.f_phase = phase;
    out.push_back({phase, optimize_angles(s, arm1, arm2, mode, options)});
  }
  return out;
}

}  // namespace bellkit
