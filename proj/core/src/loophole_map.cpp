#include "bellkit/loophole_map.hpp"

#include <cmath>
#include <sstream>

#include "bellkit/errors.hpp"
#include "bellkit/format.hpp"
#include "bellkit/parallel.hpp"

namespace bellkit {

namespace {

// A maximised CH at or below this is treated as no violation.
constexpr double kViolationFloor = 1e-14;

OptimOptions map_options() {
  OptimOptions opt;
  opt.canonicalize = false;  // only the value matters here
  return opt;
}

double max_strict_ch(const EntangledState& state, double eta, const PolarizerChannel& pol,
                     double background_fraction, const OptimOptions& base, AngleSettings* at) {
  const MeasurementArm arm{pol, {eta, 0.0}};
  OptimOptions opt = base;
  opt.background_fraction = background_fraction;
  const auto r = optimize_angles(state, arm, arm, ChMode::strict, opt);
  if (at) *at = r.settings;
  return r.ch;
}

}  // namespace

void GridSpec::validate() const {
  if (!(std::isfinite(eta_min) && std::isfinite(eta_max) && eta_min >= 0.0 && eta_min < eta_max &&
        eta_max <= 1.0)) {
    throw InputError("grid: need 0 <= eta_min < eta_max <= 1");
  }
  if (!(std::isfinite(f_min) && std::isfinite(f_max) && f_min >= 0.0 && f_min < f_max)) {
    throw InputError("grid: need 0 <= f_min < f_max");
  }
  if (eta_steps < 2 || f_steps < 2) throw InputError("grid: eta_steps and f_steps must be >= 2");
  try {
    polarizer.validate();
  } catch (const DomainError& e) {
    throw InputError(std::string("grid: ") + e.what());
  }
}

double GridSpec::eta_at(int i) const {
  return eta_min + (eta_max - eta_min) * i / (eta_steps - 1);
}

double GridSpec::f_at(int j) const { return f_min + (f_max - f_min) * j / (f_steps - 1); }

double ch_over_n(double f, double eta, const PolarizerChannel& polarizer,
                 const OptimOptions& options) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0, 1]");
  if (!(f >= 0.0) || !std::isfinite(f)) throw DomainError("f must be finite and >= 0");
  const double detections = 2.0 * eta;
  if (detections == 0.0) return 0.0;
  return max_strict_ch({f, 0.0, 1.0}, eta, polarizer, 0.0, options, nullptr) / detections;
}

std::optional<double> LoopholeMap::zero_crossing_eta(int f_index) const {
  for (int i = 0; i < spec.eta_steps; ++i) {
    const double v = value(f_index, i);
    if (v <= 0.0) continue;
    if (i == 0) return spec.eta_at(0);
    const double prev = value(f_index, i - 1);
    const double t = -prev / (v - prev);
    return spec.eta_at(i - 1) + t * (spec.eta_at(i) - spec.eta_at(i - 1));
  }
  return std::nullopt;
}

LoopholeMap grid_map(const GridSpec& spec) { return grid_map(spec, default_thread_count()); }

LoopholeMap grid_map(const GridSpec& spec, unsigned threads) {
  spec.validate();
  LoopholeMap map;
  map.spec = spec;
  const auto n_eta = static_cast<std::size_t>(spec.eta_steps);
  const auto n_f = static_cast<std::size_t>(spec.f_steps);
  map.values.assign(n_eta * n_f, 0.0);

  const OptimOptions opt = map_options();
  parallel_for(n_eta * n_f, threads, [&](std::size_t k) {
    const int fi = static_cast<int>(k / n_eta);
    const int ei = static_cast<int>(k % n_eta);
    map.values[k] = ch_over_n(spec.f_at(fi), spec.eta_at(ei), spec.polarizer, opt);
  });

  std::vector<double> etas(n_eta), fs(n_f);
  for (std::size_t i = 0; i < n_eta; ++i) etas[i] = spec.eta_at(static_cast<int>(i));
  for (std::size_t j = 0; j < n_f; ++j) fs[j] = spec.f_at(static_cast<int>(j));
  for (double level : kContourLevels) {
    for (auto& line : extract_contours(map.values, etas, fs, level)) {
      map.contours.push_back({level, std::move(line)});
    }
  }
  return map;
}

std::string map_csv(const LoopholeMap& map) {
  std::ostringstream out;
  out << "f,eta,ch_over_n\n";
  for (int fi = 0; fi < map.spec.f_steps; ++fi) {
    for (int ei = 0; ei < map.spec.eta_steps; ++ei) {
      out << format_number(map.spec.f_at(fi)) << ',' << format_number(map.spec.eta_at(ei)) << ','
          << format_number(map.value(fi, ei)) << '\n';
    }
  }
  return out.str();
}

std::string contours_csv(const LoopholeMap& map) {
  std::ostringstream out;
  out << "level,poly_id,f,eta\n";
  std::size_t id = 0;
  for (const auto& c : map.contours) {
    for (const auto& p : c.line.points) {
      out << format_number(c.level) << ',' << id << ',' << format_number(p.y) << ','
          << format_number(p.x) << '\n';
    }
    ++id;
  }
  return out.str();
}

std::optional<double> efficiency_threshold(const EntangledState& state,
                                           const PolarizerChannel& polarizer, double tolerance) {
  state.validate();
  if (!(state.f_mag > 0.0)) throw DomainError("efficiency_threshold needs f > 0");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  const OptimOptions opt = map_options();
  const auto violates = [&](double eta) {
    return max_strict_ch(state, eta, polarizer, 0.0, opt, nullptr) > kViolationFloor;
  };
  if (!violates(1.0)) return std::nullopt;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (violates(mid) ? hi : lo) = mid;
  }
  return hi;
}

ThresholdCurve threshold_curve(std::span<const double> f_values, const PolarizerChannel& polarizer,
                               double tolerance) {
  ThresholdCurve curve;
  curve.tolerance = tolerance;
  for (double f : f_values) {
    if (const auto eta = efficiency_threshold({f, 0.0, 1.0}, polarizer, tolerance)) {
      curve.points.emplace_back(f, *eta);
    }
  }
  std::sort(curve.points.begin(), curve.points.end());
  return curve;
}

BackgroundComparison background_equivalence_check(double f, double eta, double b,
                                                  const PolarizerChannel& polarizer) {
  if (!(b >= 0.0 && b < 1.0)) throw DomainError("background fraction must lie in [0, 1)");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("eta must lie in (0, 1]");
  const EntangledState state{f, 0.0, 1.0};
  const OptimOptions opt;

  BackgroundComparison out;
  out.background_fraction = b;
  out.eta = eta;
  out.equivalent_eta = eta * (1.0 - b);

  const MeasurementArm arm{polarizer, {eta, 0.0}};
  const MeasurementArm reduced{polarizer, {out.equivalent_eta, 0.0}};
  const ChObjective with_bg(state, arm, arm, ChMode::strict, b);
  const ChObjective equivalent(state, reduced, reduced, ChMode::strict);

  const auto r_bg = optimize_angles(with_bg, opt);
  const auto r_eq = optimize_angles(equivalent, opt);
  out.settings = r_bg.settings;
  out.ch_with_background = r_bg.ch;
  out.ratio_with_background = r_bg.ratio;
  out.ch_at_equivalent_eta = r_eq.ch;
  out.ratio_at_equivalent_eta = r_eq.ratio;
  if (r_bg.ratio && r_eq.ratio) out.ratio_difference = std::abs(*r_bg.ratio - *r_eq.ratio);

  out.ch_without_background = max_strict_ch(state, eta, polarizer, 0.0, opt, nullptr);
  out.ch_decreased = out.ch_with_background < out.ch_without_background;
  return out;
}

}  // namespace bellkit
