#include "bellkit/contour.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <utility>

#include "bellkit/errors.hpp"

namespace bellkit {

namespace {

// Horizontal edge (row, col)-(row, col+1) or vertical edge (row, col)-(row+1, col).
struct EdgeId {
  bool vertical;
  std::size_t row;
  std::size_t col;
  auto operator<=>(const EdgeId&) const = default;
};

}  // namespace

std::vector<Polyline> extract_contours(std::span<const double> values, std::span<const double> xs,
                                       std::span<const double> ys, double level) {
  const std::size_t nx = xs.size(), ny = ys.size();
  if (nx < 2 || ny < 2 || values.size() != nx * ny) {
    throw InputError("contour grid must be at least 2x2 and match the value count");
  }
  const auto z = [&](std::size_t r, std::size_t c) { return values[r * nx + c]; };
  const auto inside = [&](double v) { return v > level; };

  std::map<EdgeId, ContourPoint> crossing;
  const auto edge_point = [&](const EdgeId& e) -> ContourPoint {
    const std::size_t r2 = e.vertical ? e.row + 1 : e.row;
    const std::size_t c2 = e.vertical ? e.col : e.col + 1;
    const double va = z(e.row, e.col), vb = z(r2, c2);
    const double t = (level - va) / (vb - va);
    return {xs[e.col] + t * (xs[c2] - xs[e.col]), ys[e.row] + t * (ys[r2] - ys[e.row])};
  };

  std::map<EdgeId, std::vector<EdgeId>> links;
  const auto link = [&](const EdgeId& a, const EdgeId& b) {
    links[a].push_back(b);
    links[b].push_back(a);
  };

  for (std::size_t r = 0; r + 1 < ny; ++r) {
    for (std::size_t c = 0; c + 1 < nx; ++c) {
      const bool b00 = inside(z(r, c)), b01 = inside(z(r, c + 1));
      const bool b10 = inside(z(r + 1, c)), b11 = inside(z(r + 1, c + 1));
      const EdgeId bottom{false, r, c}, top{false, r + 1, c};
      const EdgeId left{true, r, c}, right{true, r, c + 1};

      std::vector<EdgeId> cut;
      if (b00 != b01) cut.push_back(bottom);
      if (b01 != b11) cut.push_back(right);
      if (b10 != b11) cut.push_back(top);
      if (b00 != b10) cut.push_back(left);
      for (const auto& e : cut) {
        if (!crossing.count(e)) crossing.emplace(e, edge_point(e));
      }

      if (cut.size() == 2) {
        link(cut[0], cut[1]);
      } else if (cut.size() == 4) {
        const double centre = 0.25 * (z(r, c) + z(r, c + 1) + z(r + 1, c) + z(r + 1, c + 1));
        if (inside(centre) == b00) {
          link(bottom, right);
          link(left, top);
        } else {
          link(bottom, left);
          link(top, right);
        }
      }
    }
  }

  std::vector<Polyline> out;
  std::map<EdgeId, bool> used;
  const auto walk = [&](EdgeId start) {
    Polyline line;
    EdgeId cur = start;
    line.points.push_back(crossing.at(cur));
    used[cur] = true;
    while (true) {
      const EdgeId* step = nullptr;
      for (const auto& n : links[cur]) {
        if (!used[n]) {
          step = &n;
          break;
        }
      }
      if (!step) {
        const auto& adj = links[cur];
        line.closed = line.points.size() > 2 &&
                      std::find(adj.begin(), adj.end(), start) != adj.end();
        break;
      }
      cur = *step;
      used[cur] = true;
      line.points.push_back(crossing.at(cur));
    }
    if (line.closed) line.points.push_back(line.points.front());
    out.push_back(std::move(line));
  };

  // Open lines start at boundary crossings (one link), then the closed loops.
  for (const auto& [edge, adj] : links) {
    if (adj.size() == 1 && !used[edge]) walk(edge);
  }
  for (const auto& [edge, adj] : links) {
    if (!used[edge]) walk(edge);
  }
  return out;
}

}  // namespace bellkit
