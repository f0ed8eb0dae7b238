// quantum_model.hpp
// Two-photon polarisation state |HH> + f|VV> from a two-crystal down-conversion
// source, analysed through imperfect polarisers and detectors.
//
// Angle convention: an analyser at angle t passes |t> = sin(t)|H> + cos(t)|V>
// with transmission eps_par and |t_perp> = cos(t)|H> - sin(t)|V> with
// transmission eps_perp. All angles are radians. Every probability is
// conditioned on one pair having been produced (no vacuum term).

#pragma once

#include <array>
#include <complex>

namespace bellkit {

struct EntangledState {
  double f_mag = 1.0;      // |f|, relative amplitude of |VV>
  double f_phase = 0.0;    // arg f, radians
  double coherence = 1.0;  // scales the |HH><VV| interference terms, in [0,1]

  [[nodiscard]] std::complex<double> f() const { return std::polar(f_mag, f_phase); }
  [[nodiscard]] double normalization() const { return 1.0 / (1.0 + f_mag * f_mag); }
  void validate() const;
};

struct PolarizerChannel {
  double eps_par = 1.0;   // transmission with the axis aligned
  double eps_perp = 0.0;  // transmission with the axis normal

  [[nodiscard]] double extinction_ratio() const { return eps_par * eps_perp; }
  void validate() const;

  static PolarizerChannel ideal() { return {}; }
};

struct DetectorChannel {
  double efficiency = 1.0;       // total quantum efficiency, coupling included
  double background_rate = 0.0;  // uncorrelated singles, counts/s

  void validate() const;
};

struct MeasurementArm {
  PolarizerChannel polarizer;
  DetectorChannel detector;

  void validate() const;

  static MeasurementArm ideal() { return {}; }
  static MeasurementArm with(double eps_par, double eps_perp, double efficiency,
                             double background_rate = 0.0) {
    return {{eps_par, eps_perp}, {efficiency, background_rate}};
  }
};

enum class Arm { first = 1, second = 2 };

// Projections of the unnormalised state onto the four product analyser
// outcomes. "par" is the transmitted eigenstate |t>, "perp" the orthogonal one.
struct PairAmplitudes {
  std::complex<double> par_par;
  std::complex<double> par_perp;
  std::complex<double> perp_par;
  std::complex<double> perp_perp;
};

PairAmplitudes pair_amplitudes(const EntangledState& state, double theta1, double theta2);

// Probability per produced pair that both arms fire with analysers at theta1,
// theta2. Includes both detector efficiencies.
double coincidence_probability(const EntangledState& state, const MeasurementArm& arm1,
                               const MeasurementArm& arm2, double theta1, double theta2);

// Coincidence probability with the `removed` arm's polariser taken out; theta
// is the angle of the polariser that stays in.
double coincidence_no_polarizer(const EntangledState& state, const MeasurementArm& arm1,
                                const MeasurementArm& arm2, double theta, Arm removed);

// Probability that the `which` arm alone fires with its polariser at theta.
double singles_probability(const EntangledState& state, const MeasurementArm& arm,
                           double theta, Arm which);

// Fraction of photons on one arm transmitted by a polariser at theta,
// ignoring detection. The reduced state is the same on both arms.
double polarizer_marginal(const EntangledState& state, const PolarizerChannel& polarizer,
                          double theta);

}  // namespace bellkit
