#include <algorithm>
#include <array>
#include <cmath>

#include "rotorlab/kernels.hpp"

namespace rotorlab::kernels {

namespace {

struct Cell {
  std::array<double, kMaxDim> lo{};
  double side = 1.0;
};

double cell_overlap(const Cell& c, int d, double r2, double tol, int depth, int max_depth) {
  double near = 0.0;
  double far = 0.0;
  for (int i = 0; i < d; ++i) {
    const double a = c.lo[i];
    const double b = a + c.side;
    const double na = a > 0.0 ? a : (b < 0.0 ? -b : 0.0);
    const double fa = std::max(std::abs(a), std::abs(b));
    near += na * na;
    far += fa * fa;
  }
  const double vol = std::pow(c.side, d);
  if (far <= r2) return vol;
  if (near >= r2) return 0.0;

  if (depth >= max_depth || vol <= tol) {
    int in = 0;
    const int corners = 1 << d;
    for (int mask = 0; mask < corners; ++mask) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        const double v = c.lo[i] + ((mask >> i) & 1 ? c.side : 0.0);
        s += v * v;
      }
      in += s < r2;
    }
    return vol * static_cast<double>(in) / corners;
  }

  double total = 0.0;
  const double half = 0.5 * c.side;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Cell child;
    child.side = half;
    for (int i = 0; i < d; ++i) child.lo[i] = c.lo[i] + ((mask >> i) & 1 ? half : 0.0);
    total += cell_overlap(child, d, r2, tol, depth + 1, max_depth);
  }
  return total;
}

}  // namespace

double cube_ball_overlap(const Point& center, double radius, double tol, int max_depth) {
  if (center.dim() == 1) {  // an interval: exact
    const double lo = std::max(center[0] - 0.5, -radius), hi = std::min(center[0] + 0.5, radius);
    return std::max(0.0, hi - lo);
  }
  Cell c;
  for (int i = 0; i < center.dim(); ++i) c.lo[i] = center[i] - 0.5;
  return cell_overlap(c, center.dim(), radius * radius, tol, 0, max_depth);
}

double ball_overlap_volume_serial(std::span<const Point> centers, double radius, double tol, int max_depth) {
  double total = 0.0;
  for (const auto& x : centers) total += cube_ball_overlap(x, radius, tol, max_depth);
  return total;
}

double ball_overlap_volume_omp(std::span<const Point> centers, double radius, double tol, int max_depth) {
  // Per-cube volumes first, then a fixed-order sum: the result does not
  // depend on the thread count.
  std::vector<double> part(centers.size());
  const auto n = static_cast<std::int64_t>(centers.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    part[static_cast<std::size_t>(i)] = cube_ball_overlap(centers[static_cast<std::size_t>(i)], radius, tol, max_depth);
  }
  double total = 0.0;
  for (const double v : part) total += v;
  return total;
}

}  // namespace rotorlab::kernels
