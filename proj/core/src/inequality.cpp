#include "bellkit/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bellkit/errors.hpp"
#include "kernels.hpp"

namespace bellkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

double reduce_half_turn(double theta) {
  double r = std::fmod(theta, kPi);
  if (r < 0.0) r += kPi;
  // fmod of a value just below a multiple of pi can round up to pi itself.
  if (r >= kPi) r = 0.0;
  return r;
}

}  // namespace

AngleSettings AngleSettings::from_degrees(double t1, double t2, double t1p, double t2p) {
  return {t1 * kDeg, t2 * kDeg, t1p * kDeg, t2p * kDeg};
}

std::array<double, 4> AngleSettings::degrees() const {
  return {theta1 / kDeg, theta2 / kDeg, theta1p / kDeg, theta2p / kDeg};
}

AngleSettings AngleSettings::canonical() const {
  return {reduce_half_turn(theta1), reduce_half_turn(theta2), reduce_half_turn(theta1p),
          reduce_half_turn(theta2p)};
}

AngleSettings AngleSettings::reflected() const {
  return AngleSettings{kPi - theta1, kPi - theta2, kPi - theta1p, kPi - theta2p}.canonical();
}

void AngleSettings::validate() const {
  for (double t : as_array()) {
    if (!std::isfinite(t)) throw DomainError("analyser angles must be finite");
  }
}

ChObjective::ChObjective(const EntangledState& state, const MeasurementArm& arm1,
                         const MeasurementArm& arm2, ChMode mode, double background_fraction)
    : pol1_(arm1.polarizer), pol2_(arm2.polarizer), mode_(mode) {
  state.validate();
  arm1.validate();
  arm2.validate();
  if (!(background_fraction >= 0.0 && background_fraction < 1.0)) {
    throw DomainError("background_fraction must lie in [0, 1)");
  }
  if (mode != ChMode::heralded && mode != ChMode::strict) {
    throw DomainError("unknown CH mode");
  }
  const auto k = detail::constants_of(state);
  f_sq_ = k.f_sq;
  re_f_ = k.re_f;
  coherence_ = k.coherence;
  norm_ = k.norm;
  eta1_ = arm1.detector.efficiency;
  eta2_ = arm2.detector.efficiency;

  const double inflation = 1.0 / (1.0 - background_fraction);
  if (mode == ChMode::heralded) {
    scale1_ = eta1_ * eta2_ * inflation;
    scale2_ = scale1_;
  } else {
    scale1_ = eta1_ * inflation;
    scale2_ = eta2_ * inflation;
  }
}

double ChObjective::marginal(double eps_par, double eps_perp, double theta) const {
  return detail::marginal_kernel({f_sq_, re_f_, coherence_, norm_}, eps_par, eps_perp,
                                 std::sin(theta), std::cos(theta));
}

double ChObjective::coincidence(double theta1, double theta2) const {
  return eta1_ * eta2_ *
         detail::coincidence_kernel({f_sq_, re_f_, coherence_, norm_}, pol1_.eps_par,
                                    pol1_.eps_perp, pol2_.eps_par, pol2_.eps_perp,
                                    std::sin(theta1), std::cos(theta1), std::sin(theta2),
                                    std::cos(theta2));
}

double ChObjective::first_arm_term(double theta1p) const {
  return scale1_ * marginal(pol1_.eps_par, pol1_.eps_perp, theta1p);
}

double ChObjective::second_arm_term(double theta2) const {
  return scale2_ * marginal(pol2_.eps_par, pol2_.eps_perp, theta2);
}

double ChObjective::operator()(const std::array<double, 4>& a) const {
  return coincidence(a[0], a[1]) - coincidence(a[0], a[3]) + coincidence(a[2], a[1]) +
         coincidence(a[2], a[3]) - first_arm_term(a[2]) - second_arm_term(a[1]);
}

ChBreakdown ChObjective::breakdown(const AngleSettings& s) const {
  s.validate();
  ChBreakdown out;
  out.terms = {coincidence(s.theta1, s.theta2),   coincidence(s.theta1, s.theta2p),
               coincidence(s.theta1p, s.theta2),  coincidence(s.theta1p, s.theta2p),
               first_arm_term(s.theta1p),         second_arm_term(s.theta2)};
  const auto& t = out.terms;
  out.ch = t[0] - t[1] + t[2] + t[3] - t[4] - t[5];
  const double den = out.denominator();
  if (den > 0.0) out.ratio = out.numerator() / den;
  return out;
}

ChBreakdown ch_sum(const EntangledState& state, const MeasurementArm& arm1,
                   const MeasurementArm& arm2, const AngleSettings& settings, ChMode mode,
                   double background_fraction) {
  return ChObjective(state, arm1, arm2, mode, background_fraction).breakdown(settings);
}

CountAnalysis ch_from_counts(const CountRecord& record, bool subtract_accidentals) {
  CountAnalysis out;
  double variance = 0.0;
  double rate_variance = 0.0;
  for (std::size_t i = 0; i < kConfigCount; ++i) {
    const auto& c = record.at(kConfigLabels[i]);
    if (c.coincidences < 0 || c.singles1 < 0 || c.singles2 < 0 || c.accidentals < 0.0) {
      throw InputError("counts must be nonnegative (config " + c.label + ")");
    }
    if (!(c.duration_s > 0.0)) {
      throw InputError("duration must be positive (config " + c.label + ")");
    }
    const double raw = static_cast<double>(c.coincidences);
    out.counts[i] = subtract_accidentals ? raw - c.accidentals : raw;
    out.ch += kConfigSigns[i] * out.counts[i];
    out.ch_rate += kConfigSigns[i] * out.counts[i] / c.duration_s;
    // Poisson variance of the raw count; the accidental estimate is treated as exact.
    variance += raw;
    rate_variance += raw / (c.duration_s * c.duration_s);
  }

  if (variance > 0.0) {
    out.sigma_ch = std::sqrt(variance);
    out.z_score = out.ch / *out.sigma_ch;
    out.sigma_ch_rate = std::sqrt(rate_variance);
  }

  const auto& n = out.counts;
  const double num = n[0] - n[1] + n[2] + n[3];
  const double den = n[4] + n[5];
  if (den > 0.0) {
    out.ratio = num / den;
    double var_num = 0.0, var_den = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      var_num += static_cast<double>(record.at(kConfigLabels[i]).coincidences);
    }
    for (std::size_t i = 4; i < kConfigCount; ++i) {
      var_den += static_cast<double>(record.at(kConfigLabels[i]).coincidences);
    }
    out.sigma_ratio = std::sqrt(var_num / (den * den) + num * num * var_den / (den * den * den * den));
  }
  return out;
}

namespace {

// Golden-section search for an extremum of g on [lo, hi]; sign = +1 maximises.
double golden_extremum(const auto& g, double lo, double hi, double sign, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double g1 = sign * g(x1), g2 = sign * g(x2);
  while (b - a > tol) {
    if (g1 < g2) {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + inv_phi * (b - a);
      g2 = sign * g(x2);
    } else {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - inv_phi * (b - a);
      g1 = sign * g(x1);
    }
  }
  return g(0.5 * (a + b));
}

}  // namespace

double visibility(const EntangledState& state, const MeasurementArm& arm1,
                  const MeasurementArm& arm2, double theta1_fixed) {
  if (!std::isfinite(theta1_fixed)) throw DomainError("theta1 must be finite");
  const ChObjective model(state, arm1, arm2, ChMode::heralded);
  const auto fringe = [&](double theta2) { return model.coincidence(theta1_fixed, theta2); };

  // 1-degree bracket, then golden-section refinement to 1e-6 rad. The curve is
  // pi-periodic so the bracket may straddle 0.
  constexpr int kSteps = 180;
  int i_max = 0, i_min = 0;
  double v_max = fringe(0.0), v_min = v_max;
  for (int i = 1; i < kSteps; ++i) {
    const double v = fringe(i * kDeg);
    if (v > v_max) v_max = v, i_max = i;
    if (v < v_min) v_min = v, i_min = i;
  }
  constexpr double kTol = 1e-6;
  const double n_max = std::max(
      v_max, golden_extremum(fringe, (i_max - 1) * kDeg, (i_max + 1) * kDeg, +1.0, kTol));
  const double n_min = std::max(
      0.0, std::min(v_min, golden_extremum(fringe, (i_min - 1) * kDeg, (i_min + 1) * kDeg, -1.0,
                                           kTol)));
  if (n_max + n_min <= 0.0) return 0.0;
  return std::clamp((n_max - n_min) / (n_max + n_min), 0.0, 1.0);
}

}  // namespace bellkit
