#include <bellkit/errors.hpp>
#include <bellkit/nelder_mead.hpp>
#include <bellkit/optimizer.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

using namespace bellkit;

namespace {

constexpr double kPi = std::numbers::pi;
const MeasurementArm kIdeal = MeasurementArm::ideal();

void check_angles(const OptimResult& r, std::array<double, 4> want_deg, double tol_deg) {
  const auto got = r.settings.degrees();
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK_MESSAGE(std::abs(got[i] - want_deg[i]) <= tol_deg, "angle ", i, ": ", got[i], " vs ",
                  want_deg[i]);
  }
}

}  // namespace

TEST_SUITE("nelder_mead") {

TEST_CASE("finds the peak of a quadratic") {
  const auto r = nelder_mead_maximize<2>(
      [](const std::array<double, 2>& x) {
        return -(x[0] - 1.0) * (x[0] - 1.0) - 3.0 * (x[1] + 2.0) * (x[1] + 2.0);
      },
      {0.0, 0.0}, 0.5, 1e-9, 10000);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-7));
}

TEST_CASE("follows the Rosenbrock valley") {
  const auto r = nelder_mead_maximize<2>(
      [](const std::array<double, 2>& x) {
        return -(100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2));
      },
      {-1.2, 1.0}, 0.1, 1e-10, 20000);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("stops at the evaluation budget") {
  const auto r = nelder_mead_maximize<3>(
      [](const std::array<double, 3>& x) { return -(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); },
      {5.0, 5.0, 5.0}, 1.0, 1e-12, 20);
  CHECK_FALSE(r.converged);
  CHECK(r.evaluations >= 20);
  CHECK(r.evaluations < 40);
}

}  // TEST_SUITE

TEST_SUITE("optimizer") {

TEST_CASE("maximally entangled optimum") {
  const auto r = optimize_angles({1.0, 0.0, 1.0}, kIdeal, kIdeal, ChMode::heralded);
  CHECK(r.converged);
  check_angles(r, {67.5, 45.0, 22.5, 0.0}, 1e-4);
  CHECK(*r.ratio == doctest::Approx(1.207).epsilon(0.001));
  CHECK(r.ch == doctest::Approx((std::sqrt(2.0) - 1.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("non-maximal optimum keeps theta2 = 45, theta2' = 0") {
  SUBCASE("f = 0.42 optimum is (72.24, 45, 17.76, 0)") {
    const auto r = optimize_angles({0.42, 0.0, 1.0}, kIdeal, kIdeal, ChMode::heralded);
    check_angles(r, {72.24, 45.0, 17.76, 0.0}, 0.2);
    CHECK(std::abs(*r.ratio - 1.16) <= 0.005);
  }
  SUBCASE("f = 0.40, frozen from a constrained independent search") {
    const auto r = optimize_angles({0.4, 0.0, 1.0}, kIdeal, kIdeal, ChMode::heralded);
    check_angles(r, {72.70385571, 45.0, 17.29614467, 0.0}, 1e-4);
    CHECK(r.ch == doctest::Approx(0.10737637771753594).epsilon(1e-12));
    // R is not stationary at the CH optimum, so it inherits the angle tolerance.
    CHECK(*r.ratio == doctest::Approx(1.1529708350874115).epsilon(1e-7));
    CHECK(r.pinned_family);
  }
}

TEST_CASE("control angles give a smaller violation") {
  const EntangledState s{0.4, 0.0, 1.0};
  const auto own = optimize_angles(s, kIdeal, kIdeal, ChMode::heralded);
  const auto maximal = optimize_angles({1.0, 0.0, 1.0}, kIdeal, kIdeal, ChMode::heralded);
  const double at_control = ch_sum(s, kIdeal, kIdeal, maximal.settings, ChMode::heralded).ch;
  CHECK(at_control < own.ch);
}

TEST_CASE("result invariants across states and modes") {
  const std::vector<EntangledState> states = {
      {1.0, 0.0, 1.0}, {0.3, 0.0, 1.0}, {0.7, 0.6, 0.9}, {1.6, 0.0, 1.0}, {0.0, 0.0, 1.0}};
  const auto lossy = MeasurementArm::with(0.98, 0.002, 0.85);
  for (const auto& s : states) {
    for (auto mode : {ChMode::heralded, ChMode::strict}) {
      const auto r = optimize_angles(s, lossy, lossy, mode);
      const auto b = ch_sum(s, lossy, lossy, r.settings, mode);
      CHECK(r.ch == doctest::Approx(b.ch).epsilon(1e-12));
      CHECK(r.ch >= r.grid_best - 1e-12);
      CHECK(r.mode == mode);
      for (double t : r.settings.as_array()) {
        CHECK(t >= 0.0);
        CHECK(t < kPi);
      }
      const double reflected = ch_sum(s, lossy, lossy, r.settings.reflected(), mode).ch;
      CHECK(reflected == doctest::Approx(r.ch).epsilon(1e-9));
    }
  }
}

TEST_CASE("product state returns a converged non-violating result") {
  const auto r = optimize_angles({0.0, 0.0, 1.0}, kIdeal, kIdeal, ChMode::heralded);
  CHECK(r.converged);
  CHECK(r.ch <= 1e-12);
}

TEST_CASE("optimizer beats an exhaustive 0.5 degree grid (strict, f=0.4, eta=0.75)") {
  const auto arm = MeasurementArm::with(1.0, 0.0, 0.75);
  const auto r = optimize_angles({0.4, 0.0, 1.0}, arm, arm, ChMode::strict);
  // tests/oracles/generate_frozen.py
  const double grid = 0.004673676475669894;
  CHECK(r.ch >= grid);
  CHECK(r.ch - grid < 1e-5);
}

TEST_CASE("deterministic output") {
  const EntangledState s{0.55, 0.2, 0.95};
  const auto a = optimize_angles(s, kIdeal, kIdeal, ChMode::strict);
  const auto b = optimize_angles(s, kIdeal, kIdeal, ChMode::strict);
  CHECK(a.settings.as_array() == b.settings.as_array());
  CHECK(a.ch == b.ch);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("options validation") {
  OptimOptions bad;
  bad.starts = 0;
  CHECK_THROWS_AS(optimize_angles({1.0, 0.0, 1.0}, kIdeal, kIdeal, ChMode::heralded, bad),
                  InputError);
}

TEST_CASE("phase sweep") {
  const EntangledState s{1.0, 0.0, 1.0};
  CHECK_THROWS_AS(phase_sweep(s, kIdeal, kIdeal, {}, ChMode::heralded), InputError);

  std::vector<double> phases;
  for (int i = 0; i <= 10; ++i) phases.push_back(i * kPi / 20.0);
  const auto sweep = phase_sweep(s, kIdeal, kIdeal, phases, ChMode::heralded);
  REQUIRE(sweep.size() == phases.size());
  CHECK(sweep.front().result.ch == doctest::Approx((std::sqrt(2.0) - 1.0) / 2.0).epsilon(1e-12));
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    CHECK(sweep[i].phase == phases[i]);
    CHECK(sweep[i].result.ch <= sweep[i - 1].result.ch + 1e-12);
  }
  CHECK(sweep.back().result.ch <= 1e-9);

  for (double f : {0.2, 0.5, 2.0}) {
    const double at_half_pi =
        phase_sweep({f, 0.0, 1.0}, kIdeal, kIdeal, std::vector<double>{kPi / 2}, ChMode::heralded)
            .front()
            .result.ch;
    CHECK(at_half_pi <= 1e-9);
  }

  const std::vector<double> ends = {0.0, kPi};
  const auto pi_sweep = phase_sweep(s, kIdeal, kIdeal, ends, ChMode::heralded);
  CHECK(pi_sweep[1].result.ch == doctest::Approx(pi_sweep[0].result.ch).epsilon(1e-10));
}

}  // TEST_SUITE
