#include "bellkit/quantum_model.hpp"

#include <cmath>
#include <string>

#include "bellkit/errors.hpp"
#include "kernels.hpp"

namespace bellkit {

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

void require_unit_interval(double value, const char* what) {
  require_finite(value, what);
  if (value < 0.0 || value > 1.0) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

Arm checked(Arm arm) {
  if (arm != Arm::first && arm != Arm::second) {
    throw DomainError("arm selector must be 1 or 2");
  }
  return arm;
}

}  // namespace

void EntangledState::validate() const {
  require_finite(f_mag, "f_mag");
  require_finite(f_phase, "f_phase");
  if (f_mag < 0.0) throw DomainError("f_mag must be >= 0");
  require_unit_interval(coherence, "coherence");
}

void PolarizerChannel::validate() const {
  require_unit_interval(eps_par, "eps_par");
  require_unit_interval(eps_perp, "eps_perp");
  if (eps_perp > eps_par) throw DomainError("eps_perp must not exceed eps_par");
}

void DetectorChannel::validate() const {
  require_unit_interval(efficiency, "efficiency");
  require_finite(background_rate, "background_rate");
  if (background_rate < 0.0) throw DomainError("background_rate must be >= 0");
}

void MeasurementArm::validate() const {
  polarizer.validate();
  detector.validate();
}

PairAmplitudes pair_amplitudes(const EntangledState& state, double theta1, double theta2) {
  state.validate();
  require_finite(theta1, "theta1");
  require_finite(theta2, "theta2");
  const double s1 = std::sin(theta1), c1 = std::cos(theta1);
  const double s2 = std::sin(theta2), c2 = std::cos(theta2);
  const std::complex<double> f = state.f();
  return {s1 * s2 + f * (c1 * c2), s1 * c2 - f * (c1 * s2), c1 * s2 - f * (s1 * c2),
          c1 * c2 + f * (s1 * s2)};
}

double coincidence_probability(const EntangledState& state, const MeasurementArm& arm1,
                               const MeasurementArm& arm2, double theta1, double theta2) {
  state.validate();
  arm1.validate();
  arm2.validate();
  require_finite(theta1, "theta1");
  require_finite(theta2, "theta2");

  const auto& p1 = arm1.polarizer;
  const auto& p2 = arm2.polarizer;
  const double sum =
      detail::coincidence_kernel(detail::constants_of(state), p1.eps_par, p1.eps_perp, p2.eps_par,
                                 p2.eps_perp, std::sin(theta1), std::cos(theta1),
                                 std::sin(theta2), std::cos(theta2));
  return arm1.detector.efficiency * arm2.detector.efficiency * sum;
}

double polarizer_marginal(const EntangledState& state, const PolarizerChannel& polarizer,
                          double theta) {
  state.validate();
  polarizer.validate();
  require_finite(theta, "theta");
  return detail::marginal_kernel(detail::constants_of(state), polarizer.eps_par, polarizer.eps_perp,
                                 std::sin(theta), std::cos(theta));
}

double coincidence_no_polarizer(const EntangledState& state, const MeasurementArm& arm1,
                                const MeasurementArm& arm2, double theta, Arm removed) {
  arm1.validate();
  arm2.validate();
  const auto& kept = checked(removed) == Arm::second ? arm1 : arm2;
  return arm1.detector.efficiency * arm2.detector.efficiency *
         polarizer_marginal(state, kept.polarizer, theta);
}

double singles_probability(const EntangledState& state, const MeasurementArm& arm, double theta,
                           Arm which) {
  checked(which);
  arm.validate();
  return arm.detector.efficiency * polarizer_marginal(state, arm.polarizer, theta);
}

}  // namespace bellkit
