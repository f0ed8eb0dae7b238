// nelder_mead.hpp
// Derivative-free simplex maximisation over a fixed number of unconstrained
// coordinates (standard reflection 1, expansion 2, contraction 1/2, shrink 1/2).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace bellkit {

template <std::size_t N>
struct SimplexResult {
  std::array<double, N> x{};
  double value = 0.0;
  long evaluations = 0;
  bool converged = false;  // simplex diameter fell below the tolerance
};

// Maximises f starting from an axis-aligned simplex of edge `step` at
// `start`. Stops when every vertex lies within `tolerance` (Euclidean) of the
// best vertex, or after `max_evaluations` calls to f.
template <std::size_t N, class F>
SimplexResult<N> nelder_mead_maximize(F&& f, const std::array<double, N>& start, double step,
                                      double tolerance, long max_evaluations) {
  using Point = std::array<double, N>;
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  std::array<Point, N + 1> x{};
  std::array<double, N + 1> fx{};
  long evals = 0;
  auto eval = [&](const Point& p) {
    ++evals;
    return f(p);
  };

  x[0] = start;
  fx[0] = eval(start);
  for (std::size_t i = 0; i < N; ++i) {
    x[i + 1] = start;
    x[i + 1][i] += step;
    fx[i + 1] = eval(x[i + 1]);
  }

  std::array<std::size_t, N + 1> order{};
  auto along = [](const Point& from, const Point& to, double t) {
    Point p{};
    for (std::size_t d = 0; d < N; ++d) p[d] = from[d] + t * (to[d] - from[d]);
    return p;
  };

  bool converged = false;
  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fx[a] > fx[b]; });
    const std::size_t best = order[0], worst = order[N], second_worst = order[N - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= N; ++i) {
      double d2 = 0.0;
      for (std::size_t d = 0; d < N; ++d) d2 += (x[i][d] - x[best][d]) * (x[i][d] - x[best][d]);
      diameter = std::max(diameter, std::sqrt(d2));
    }
    if (diameter < tolerance) {
      converged = true;
      break;
    }
    if (evals >= max_evaluations) break;

    Point centroid{};
    for (std::size_t k = 0; k < N; ++k) {
      for (std::size_t d = 0; d < N; ++d) centroid[d] += x[order[k]][d] / static_cast<double>(N);
    }

    const Point reflected = along(centroid, x[worst], -kReflect);
    const double f_reflected = eval(reflected);

    if (f_reflected > fx[best]) {
      const Point expanded = along(centroid, x[worst], -kReflect * kExpand);
      const double f_expanded = eval(expanded);
      if (f_expanded > f_reflected) {
        x[worst] = expanded, fx[worst] = f_expanded;
      } else {
        x[worst] = reflected, fx[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected > fx[second_worst]) {
      x[worst] = reflected, fx[worst] = f_reflected;
      continue;
    }

    if (f_reflected > fx[worst]) {
      const Point outside = along(centroid, reflected, kContract);
      const double f_outside = eval(outside);
      if (f_outside >= f_reflected) {
        x[worst] = outside, fx[worst] = f_outside;
        continue;
      }
    } else {
      const Point inside = along(centroid, x[worst], kContract);
      const double f_inside = eval(inside);
      if (f_inside > fx[worst]) {
        x[worst] = inside, fx[worst] = f_inside;
        continue;
      }
    }

    for (std::size_t i = 0; i <= N; ++i) {
      if (i == best) continue;
      x[i] = along(x[best], x[i], kShrink);
      fx[i] = eval(x[i]);
    }
  }

  const auto best_it = std::max_element(fx.begin(), fx.end());
  const auto idx = static_cast<std::size_t>(best_it - fx.begin());
  return {x[idx], fx[idx], evals, converged};
}

}  // namespace bellkit
