// inequality.hpp
// Clauser-Horne sum
//   CH = N(t1,t2) - N(t1,t2') + N(t1',t2) + N(t1',t2') - N(t1',inf) - N(inf,t2)
// and its ratio form R = (first four terms) / (last two terms), evaluated from
// model probabilities or from counts. CH <= 0 for every local realistic model.

#pragma once

#include <array>
#include <optional>

#include "bellkit/counts.hpp"
#include "bellkit/quantum_model.hpp"

namespace bellkit {

struct AngleSettings {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta1p = 0.0;
  double theta2p = 0.0;

  static AngleSettings from_degrees(double t1, double t2, double t1p, double t2p);
  [[nodiscard]] std::array<double, 4> degrees() const;
  [[nodiscard]] std::array<double, 4> as_array() const { return {theta1, theta2, theta1p, theta2p}; }
  static AngleSettings from_array(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }

  // Every angle reduced to [0, pi).
  [[nodiscard]] AngleSettings canonical() const;
  // theta -> pi - theta on all four angles, reduced to [0, pi).
  [[nodiscard]] AngleSettings reflected() const;
  void validate() const;
};

// heralded: last two terms are coincidences with one polariser removed.
// strict:   last two terms are true single-arm detection probabilities.
enum class ChMode { heralded, strict };

struct ChBreakdown {
  std::array<double, kConfigCount> terms{};  // unsigned, in Config order
  double ch = 0.0;
  std::optional<double> ratio;  // empty when the denominator is not positive

  [[nodiscard]] double term(Config c) const { return terms[static_cast<std::size_t>(c)]; }
  [[nodiscard]] double numerator() const { return terms[0] - terms[1] + terms[2] + terms[3]; }
  [[nodiscard]] double denominator() const { return terms[4] + terms[5]; }
};

// CH evaluator with the state and hardware fixed. Validates once at
// construction; the call operator is the hot path of the optimizer.
//
// background_fraction b in [0,1) is the share of the last two (singles-like)
// terms that comes from background; those terms are divided by (1 - b).
class ChObjective {
 public:
  ChObjective(const EntangledState& state, const MeasurementArm& arm1, const MeasurementArm& arm2,
              ChMode mode, double background_fraction = 0.0);

  [[nodiscard]] double operator()(const std::array<double, 4>& angles) const;
  [[nodiscard]] ChBreakdown breakdown(const AngleSettings& settings) const;

  [[nodiscard]] double coincidence(double theta1, double theta2) const;
  // N(theta1', inf) term (heralded) or arm-1 singles (strict), background included.
  [[nodiscard]] double first_arm_term(double theta1p) const;
  // N(inf, theta2) term (heralded) or arm-2 singles (strict), background included.
  [[nodiscard]] double second_arm_term(double theta2) const;

  [[nodiscard]] ChMode mode() const { return mode_; }

 private:
  double marginal(double eps_par, double eps_perp, double theta) const;

  double f_sq_;
  double re_f_;
  double coherence_;
  double norm_;
  PolarizerChannel pol1_;
  PolarizerChannel pol2_;
  double eta1_;
  double eta2_;
  double scale1_;  // multiplier on the arm-1 marginal in the last terms
  double scale2_;
  ChMode mode_;
};

ChBreakdown ch_sum(const EntangledState& state, const MeasurementArm& arm1,
                   const MeasurementArm& arm2, const AngleSettings& settings, ChMode mode,
                   double background_fraction = 0.0);

struct CountAnalysis {
  std::array<double, kConfigCount> counts{};  // coincidences, accidentals removed if requested
  double ch = 0.0;                            // in counts
  std::optional<double> sigma_ch;             // Poisson; empty when all counts are zero
  std::optional<double> z_score;
  double ch_rate = 0.0;  // counts/s, each term over its own duration
  std::optional<double> sigma_ch_rate;
  std::optional<double> ratio;  // empty when the denominator is zero
  std::optional<double> sigma_ratio;
};

// CH, R and first-order Poisson uncertainties from raw counts.
CountAnalysis ch_from_counts(const CountRecord& counts, bool subtract_accidentals = false);

// Fringe visibility (Nmax - Nmin)/(Nmax + Nmin) of the coincidence curve as
// arm 2 rotates through [0, pi) with arm 1 fixed at theta1_fixed.
double visibility(const EntangledState& state, const MeasurementArm& arm1,
                  const MeasurementArm& arm2, double theta1_fixed);

}  // namespace bellkit
