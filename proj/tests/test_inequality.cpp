#include <bellkit/errors.hpp>
#include <bellkit/inequality.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"

using namespace bellkit;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

const MeasurementArm kIdeal = MeasurementArm::ideal();

// Exhaustive maximum of CH over a full 4-D grid, reduced exactly by
// maximising the theta2 and theta2' parts separately for each
// (theta1, theta1') pair. Built from the public probability functions only.
double grid_max_ch(const EntangledState& s, const MeasurementArm& a1, const MeasurementArm& a2,
                   ChMode mode, int n) {
  const double step = kPi / n;
  std::vector<double> N(static_cast<std::size_t>(n) * n), L1(n), L2(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) N[i * n + j] = coincidence_probability(s, a1, a2, i * step, j * step);
    L1[i] = mode == ChMode::heralded
                ? coincidence_no_polarizer(s, a1, a2, i * step, Arm::second)
                : singles_probability(s, a1, i * step, Arm::first);
    L2[i] = mode == ChMode::heralded ? coincidence_no_polarizer(s, a1, a2, i * step, Arm::first)
                                     : singles_probability(s, a2, i * step, Arm::second);
  }
  double best = -1e300;
  for (int a = 0; a < n; ++a) {
    for (int ap = 0; ap < n; ++ap) {
      double bb = -1e300, bbp = -1e300;
      for (int b = 0; b < n; ++b) {
        bb = std::max(bb, N[a * n + b] + N[ap * n + b] - L2[b]);
        bbp = std::max(bbp, N[ap * n + b] - N[a * n + b]);
      }
      best = std::max(best, bb + bbp - L1[ap]);
    }
  }
  return best;
}

CountRecord record_from(const std::array<std::int64_t, 6>& c, double duration = 1.0) {
  CountRecord r;
  for (std::size_t i = 0; i < 6; ++i) {
    r.configs.push_back({std::string(kConfigLabels[i]), c[i], 0, 0, 0.0, duration});
  }
  return r;
}

}  // namespace

TEST_SUITE("inequality") {

TEST_CASE("maximally entangled state at the canonical angles gives R = 1.207") {
  const auto b = ch_sum({1.0, 0.0, 1.0}, kIdeal, kIdeal,
                        AngleSettings::from_degrees(67.5, 45.0, 22.5, 0.0), ChMode::heralded);
  REQUIRE(b.ratio);
  CHECK(*b.ratio == doctest::Approx(1.207).epsilon(0.001 / 1.207));
  CHECK(*b.ratio == doctest::Approx((1.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-14));
  CHECK(b.ch == doctest::Approx((std::sqrt(2.0) - 1.0) / 2.0).epsilon(1e-13));
}

TEST_CASE("printed non-maximal angles") {
  const auto s = AngleSettings::from_degrees(72.24, 45.0, 17.76, 0.0);
  // f = 0.42 is the value these angles are optimal for; R = 1.16.
  const auto b42 = ch_sum({0.42, 0.0, 1.0}, kIdeal, kIdeal, s, ChMode::heralded);
  CHECK(*b42.ratio == doctest::Approx(1.16).epsilon(0.005 / 1.16));
  CHECK(*b42.ratio == doctest::Approx(1.1599538234459463).epsilon(1e-12));
  // f = 0.40 exactly, frozen from tests/oracles/generate_frozen.py.
  const auto b40 = ch_sum({0.4, 0.0, 1.0}, kIdeal, kIdeal, s, ChMode::heralded);
  CHECK(*b40.ratio == doctest::Approx(1.1521276465121493).epsilon(1e-12));
  CHECK(b40.ch == doctest::Approx(0.1072967619927091).epsilon(1e-12));
}

TEST_CASE("product state never violates (1 degree exhaustive grid)") {
  const EntangledState product{0.0, 0.0, 1.0};
  CHECK(grid_max_ch(product, kIdeal, kIdeal, ChMode::heralded, 180) <= 1e-15);
  CHECK(grid_max_ch(product, kIdeal, kIdeal, ChMode::strict, 180) <= 1e-15);
  const auto lossy = MeasurementArm::with(0.97, 0.01, 0.8);
  CHECK(grid_max_ch(product, lossy, lossy, ChMode::strict, 180) <= 1e-15);
}

TEST_CASE("breakdown bookkeeping") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const EntangledState s{2.0 * u(rng), 2 * kPi * u(rng), u(rng)};
    const auto a1 = MeasurementArm::with(0.9 + 0.1 * u(rng), 0.01 * u(rng), 0.3 + 0.7 * u(rng));
    const auto a2 = MeasurementArm::with(0.9 + 0.1 * u(rng), 0.01 * u(rng), 0.3 + 0.7 * u(rng));
    const AngleSettings st{kPi * u(rng), kPi * u(rng), kPi * u(rng), kPi * u(rng)};
    const auto h = ch_sum(s, a1, a2, st, ChMode::heralded);
    const auto x = ch_sum(s, a1, a2, st, ChMode::strict);
    const auto& t = h.terms;
    CHECK(h.ch == t[0] - t[1] + t[2] + t[3] - t[4] - t[5]);

    // Strict differs only in the single-arm terms, by 1/eta of the other arm.
    for (int k = 0; k < 4; ++k) CHECK(x.terms[k] == h.terms[k]);
    CHECK(x.terms[4] == doctest::Approx(h.terms[4] / a2.detector.efficiency).epsilon(1e-12));
    CHECK(x.terms[5] == doctest::Approx(h.terms[5] / a1.detector.efficiency).epsilon(1e-12));
    CHECK(x.ch <= h.ch + 1e-15);

    // R > 1 iff CH > 0.
    REQUIRE(h.ratio);
    CHECK((*h.ratio > 1.0) == (h.ch > 0.0));

    // No local violation without interference.
    EntangledState mixed = s;
    mixed.coherence = 0.0;
    CHECK(ch_sum(mixed, a1, a2, st, ChMode::heralded).ch <= 1e-15);
  }
}

TEST_CASE("heralded and strict agree at unit efficiency") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const EntangledState s{2.0 * u(rng), kPi * u(rng), 1.0};
    const AngleSettings st{kPi * u(rng), kPi * u(rng), kPi * u(rng), kPi * u(rng)};
    const auto arm = MeasurementArm::with(0.99, 0.001, 1.0);
    const auto h = ch_sum(s, arm, arm, st, ChMode::heralded);
    const auto x = ch_sum(s, arm, arm, st, ChMode::strict);
    CHECK(x.ch == doctest::Approx(h.ch).epsilon(1e-12));
  }
}

TEST_CASE("background fraction inflates the single-arm terms") {
  const auto st = AngleSettings::from_degrees(67.5, 45.0, 22.5, 0.0);
  const auto plain = ch_sum({1.0, 0.0, 1.0}, kIdeal, kIdeal, st, ChMode::strict);
  const auto bg = ch_sum({1.0, 0.0, 1.0}, kIdeal, kIdeal, st, ChMode::strict, 0.1);
  CHECK(*bg.ratio == doctest::Approx(*plain.ratio * 0.9).epsilon(1e-13));
  CHECK_THROWS_AS(ch_sum({1.0, 0.0, 1.0}, kIdeal, kIdeal, st, ChMode::strict, 1.0), DomainError);
}

TEST_CASE("angle settings canonicalisation") {
  const AngleSettings s{-0.1, kPi + 0.2, 3 * kPi, 0.5};
  const auto c = s.canonical();
  CHECK(c.theta1 == doctest::Approx(kPi - 0.1));
  CHECK(c.theta2 == doctest::Approx(0.2));
  CHECK(c.theta1p == doctest::Approx(0.0).epsilon(1e-12));
  for (double t : c.as_array()) {
    CHECK(t >= 0.0);
    CHECK(t < kPi);
  }
  const auto r = AngleSettings::from_degrees(72.24, 45, 17.76, 0).reflected().degrees();
  CHECK(r[0] == doctest::Approx(107.76));
  CHECK(r[1] == doctest::Approx(135.0));
  CHECK(r[3] == doctest::Approx(0.0));
  CHECK_THROWS_AS(AngleSettings({std::nan(""), 0, 0, 0}).validate(), DomainError);
}

TEST_CASE("CH from counts") {
  SUBCASE("equal counts cancel") {
    const auto a = ch_from_counts(record_from({100, 100, 100, 100, 100, 100}));
    CHECK(a.ch == 0.0);
    CHECK(*a.sigma_ch == doctest::Approx(std::sqrt(600.0)));
    CHECK(*a.ratio == doctest::Approx(1.0));
  }
  SUBCASE("a few thousand counts per term give almost four sigma") {
    const auto a = ch_from_counts(record_from({3123, 900, 3123, 3123, 3978, 3979}));
    CHECK(a.ch == 512.0);
    CHECK(*a.sigma_ch == doctest::Approx(135.0).epsilon(0.001));
    CHECK(*a.z_score == doctest::Approx(3.79).epsilon(0.01));
  }
  SUBCASE("all zero") {
    const auto a = ch_from_counts(record_from({0, 0, 0, 0, 0, 0}));
    CHECK(a.ch == 0.0);
    CHECK_FALSE(a.sigma_ch);
    CHECK_FALSE(a.z_score);
    CHECK_FALSE(a.ratio);
  }
  SUBCASE("ratio uncertainty is first-order propagation") {
    const auto a = ch_from_counts(record_from({400, 100, 400, 400, 500, 500}));
    const double num = 1100, den = 1000;
    CHECK(*a.ratio == doctest::Approx(1.1));
    CHECK(*a.sigma_ratio ==
          doctest::Approx(std::sqrt(1300.0 / (den * den) + num * num * 1000.0 / std::pow(den, 4))));
  }
  SUBCASE("rates use each configuration's duration") {
    auto r = record_from({400, 100, 400, 400, 500, 500}, 2.0);
    const auto a = ch_from_counts(r);
    CHECK(a.ch_rate == doctest::Approx(a.ch / 2.0));
    CHECK(*a.sigma_ch_rate == doctest::Approx(*a.sigma_ch / 2.0));
  }
  SUBCASE("accidentals can be subtracted") {
    auto r = record_from({400, 100, 400, 400, 500, 500});
    for (auto& c : r.configs) c.accidentals = 10.0;
    CHECK(ch_from_counts(r, true).ch == doctest::Approx(ch_from_counts(r).ch));
    r.configs[1].accidentals = 30.0;
    CHECK(ch_from_counts(r, true).ch == doctest::Approx(ch_from_counts(r).ch + 20.0));
  }
  SUBCASE("missing configuration") {
    auto r = record_from({1, 2, 3, 4, 5, 6});
    r.configs.pop_back();
    CHECK_THROWS_AS(ch_from_counts(r), InputError);
  }
  SUBCASE("duplicate configuration") {
    auto r = record_from({1, 2, 3, 4, 5, 6});
    r.configs.push_back(r.configs.front());
    CHECK_THROWS_AS(ch_from_counts(r), InputError);
  }
}

TEST_CASE("counts proportional to probabilities reproduce the analytic CH") {
  const double scale = 1e15;
  for (double f : {1.0, 0.4, 0.1}) {
    const auto arm = MeasurementArm::with(0.98, 1e-3, 0.9);
    const auto st = AngleSettings::from_degrees(70.0, 44.0, 19.0, 2.0);
    const auto b = ch_sum({f, 0.0, 1.0}, arm, arm, st, ChMode::heralded);
    std::array<std::int64_t, 6> c{};
    for (std::size_t i = 0; i < 6; ++i) c[i] = std::llround(scale * b.terms[i]);
    const auto a = ch_from_counts(record_from(c));
    CHECK(a.ch / scale == doctest::Approx(b.ch).epsilon(1e-9));
    CHECK(*a.ratio == doctest::Approx(*b.ratio).epsilon(1e-9));
  }
}

TEST_CASE("visibility") {
  CHECK(visibility({1.0, 0.0, 1.0}, kIdeal, kIdeal, 45 * kDeg) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(visibility({1.0, 0.0, 0.973}, kIdeal, kIdeal, 45 * kDeg) - 0.973) < 1e-6);
  // Pure state: the fringe reaches zero at tan(theta2) = -f. Dense-scan oracle
  // gives 0.9999999996 at 1e-4 rad resolution.
  CHECK(visibility({0.4, 0.0, 1.0}, kIdeal, kIdeal, 45 * kDeg) == doctest::Approx(1.0).epsilon(1e-9));

  // Partially polarised fringe, against a dense scan.
  const EntangledState s{0.6, 0.3, 0.8};
  const auto arm = MeasurementArm::with(0.97, 0.02, 0.8);
  double hi = -1, lo = 2;
  for (double t = 0; t < kPi; t += 1e-5) {
    const double v = coincidence_probability(s, arm, arm, 0.6, t);
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  CHECK(visibility(s, arm, arm, 0.6) == doctest::Approx((hi - lo) / (hi + lo)).epsilon(1e-8));

  double prev = 2.0;
  for (double mu = 1.0; mu >= 0.0; mu -= 0.1) {
    const double v = visibility({0.7, 0.2, std::max(0.0, mu)}, kIdeal, kIdeal, 0.9);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

}  // TEST_SUITE
