// Marching-squares iso-lines on a rectilinear grid.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bellkit {

struct ContourPoint {
  double x;
  double y;
};

struct Polyline {
  std::vector<ContourPoint> points;
  bool closed = false;
};

// `values` is row-major with rows along y: values[row * xs.size() + col].
// Crossings are linearly interpolated on cell edges; saddle cells are
// resolved with the cell-centre average. Output order is deterministic.
std::vector<Polyline> extract_contours(std::span<const double> values, std::span<const double> xs,
                                       std::span<const double> ys, double level);

}  // namespace bellkit
