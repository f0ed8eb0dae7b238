#include "bellkit/montecarlo.hpp"

#include <cmath>
#include <random>

#include "bellkit/errors.hpp"
#include "bellkit/parallel.hpp"

namespace bellkit {

namespace {

// Largest Poisson mean accepted; keeps counts exactly representable.
constexpr double kMaxMean = 9.0e15;
constexpr int kWideUncertaintyBelow = 30;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::int64_t draw_poisson(std::mt19937_64& rng, double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(rng);
}

struct ConfigAngles {
  const double* theta1;  // nullptr: polariser removed
  const double* theta2;
};

std::array<ConfigAngles, kConfigCount> config_angles(const AngleSettings& s) {
  return {{{&s.theta1, &s.theta2},
           {&s.theta1, &s.theta2p},
           {&s.theta1p, &s.theta2},
           {&s.theta1p, &s.theta2p},
           {&s.theta1p, nullptr},
           {nullptr, &s.theta2}}};
}

double mean_std(const std::vector<double>& v, double& sigma) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sigma = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return mean;
}

}  // namespace

void RunConfig::validate() const {
  if (!(std::isfinite(pair_rate) && pair_rate >= 0.0)) throw InputError("pair_rate must be >= 0");
  if (!(std::isfinite(duration_s) && duration_s > 0.0)) throw InputError("duration_s must be > 0");
  if (!(std::isfinite(coincidence_window_s) && coincidence_window_s > 0.0)) {
    throw InputError("coincidence_window_s must be > 0");
  }
  try {
    state.validate();
    arm1.validate();
    arm2.validate();
    settings.validate();
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
}

std::array<ExpectedConfigCounts, kConfigCount> expected_counts(const RunConfig& config) {
  config.validate();
  const double pairs = config.pair_rate * config.duration_s;
  const double eta1 = config.arm1.detector.efficiency;
  const double eta2 = config.arm2.detector.efficiency;
  const auto angles = config_angles(config.settings);

  std::array<ExpectedConfigCounts, kConfigCount> out{};
  for (std::size_t k = 0; k < kConfigCount; ++k) {
    const auto [t1, t2] = angles[k];
    double p_cc = 0.0;
    if (t1 && t2) {
      p_cc = coincidence_probability(config.state, config.arm1, config.arm2, *t1, *t2);
    } else if (t1) {
      p_cc = coincidence_no_polarizer(config.state, config.arm1, config.arm2, *t1, Arm::second);
    } else {
      p_cc = coincidence_no_polarizer(config.state, config.arm1, config.arm2, *t2, Arm::first);
    }
    const double p1 = t1 ? singles_probability(config.state, config.arm1, *t1, Arm::first) : eta1;
    const double p2 = t2 ? singles_probability(config.state, config.arm2, *t2, Arm::second) : eta2;

    auto& e = out[k];
    e.true_coincidences = pairs * p_cc;
    e.singles1 = pairs * p1 + config.arm1.detector.background_rate * config.duration_s;
    e.singles2 = pairs * p2 + config.arm2.detector.background_rate * config.duration_s;
    e.accidentals = e.singles1 * e.singles2 * config.coincidence_window_s / config.duration_s;
  }
  return out;
}

double expected_ch_counts(const RunConfig& config) {
  const auto e = expected_counts(config);
  double ch = 0.0;
  for (std::size_t k = 0; k < kConfigCount; ++k) {
    ch += kConfigSigns[k] * (e[k].true_coincidences + e[k].accidentals);
  }
  return ch;
}

CountRecord simulate_run(const RunConfig& config) {
  const auto expected = expected_counts(config);
  CountRecord record;
  record.configs.reserve(kConfigCount);
  for (std::size_t k = 0; k < kConfigCount; ++k) {
    const auto& e = expected[k];
    for (double m : {e.true_coincidences, e.singles1, e.singles2, e.accidentals}) {
      if (!(m <= kMaxMean)) throw InputError("expected counts exceed the representable range");
    }
    std::mt19937_64 rng(substream_seed(config.seed, k));
    ConfigCounts c;
    c.label = std::string(kConfigLabels[k]);
    const std::int64_t true_cc = draw_poisson(rng, e.true_coincidences);
    c.singles1 = draw_poisson(rng, e.singles1);
    c.singles2 = draw_poisson(rng, e.singles2);
    c.coincidences = true_cc + draw_poisson(rng, e.accidentals);
    c.accidentals = static_cast<double>(c.singles1) * static_cast<double>(c.singles2) *
                    config.coincidence_window_s / config.duration_s;
    c.duration_s = config.duration_s;
    record.configs.push_back(std::move(c));
  }
  return record;
}

ReplicateSummary replicate_study(const RunConfig& config, int replicas, unsigned threads) {
  if (replicas < 2) throw InputError("replicate_study needs at least 2 replicas");
  config.validate();

  std::vector<CountAnalysis> results(static_cast<std::size_t>(replicas));
  parallel_for(results.size(), threads, [&](std::size_t k) {
    RunConfig c = config;
    c.seed = config.seed + k;
    results[k] = ch_from_counts(simulate_run(c));
  });

  ReplicateSummary s;
  s.replicas = replicas;
  std::vector<double> rates, ratios, ratio_sigmas;
  for (const auto& r : results) {
    s.ch.push_back(r.ch);
    s.sigma_ch.push_back(r.sigma_ch.value_or(0.0));
    s.z_scores.push_back(r.z_score.value_or(0.0));
    rates.push_back(r.ch_rate);
    if (r.ratio) {
      ratios.push_back(*r.ratio);
      ratio_sigmas.push_back(r.sigma_ratio.value_or(0.0));
    }
  }
  double unused = 0.0;
  s.mean_ch = mean_std(s.ch, s.empirical_sigma_ch);
  s.mean_propagated_sigma_ch = mean_std(s.sigma_ch, unused);
  s.mean_ch_rate = mean_std(rates, s.empirical_sigma_ch_rate);
  s.ratio_defined = static_cast<int>(ratios.size());
  if (!ratios.empty()) {
    s.mean_ratio = mean_std(ratios, s.empirical_sigma_ratio);
    s.mean_propagated_sigma_ratio = mean_std(ratio_sigmas, unused);
  }
  s.wide_uncertainty = replicas < kWideUncertaintyBelow;
  return s;
}

}  // namespace bellkit
