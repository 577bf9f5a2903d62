#include <algorithm>
#include <cmath>

#include "rotorlab/kernels.hpp"

#include <omp.h>

namespace rotorlab::kernels {

namespace {

// Below this many sites per color the fork/join overhead dominates.
constexpr std::size_t kParallelThreshold = 4096;

inline double stencil_mean(const double* u, std::size_t idx, std::span<const std::int64_t> offsets) {
  double s = 0.0;
  for (const auto off : offsets) s += u[static_cast<std::int64_t>(idx) + off];
  return s / static_cast<double>(offsets.size());
}

}  // namespace

StencilGrid StencilGrid::build(const Region& a) {
  StencilGrid g;
  const int d = a.dim();
  Point lo = a.lo(), hi = a.hi();
  for (int i = 0; i < d; ++i) {
    lo[i] -= 1;
    hi[i] += 1;
  }
  g.box = BoxIndex(lo, hi);
  g.inside.assign(g.box.size(), 0);
  for (const auto& x : a) g.inside[g.box.index(x)] = 1;
  for (std::size_t idx = 0; idx < g.box.size(); ++idx) {
    if (!g.inside[idx]) continue;
    const Point x = g.box.point(idx);
    std::int64_t parity = 0;
    for (int i = 0; i < d; ++i) parity += x[i] - lo[i];
    (parity % 2 == 0 ? g.red : g.black).push_back(idx);
  }
  for (int k = 0; k < 2 * d; ++k) {
    const Direction dir = Direction::from_index(k, d);
    g.offsets.push_back(dir.sign * g.box.stride(dir.axis));
  }
  return g;
}

void sor_sweep_serial(const StencilGrid& g, std::span<double> u, double omega) {
  double* data = u.data();
  for (const auto* color : {&g.red, &g.black}) {
    for (const std::size_t idx : *color) {
      const double target = stencil_mean(data, idx, g.offsets) + 1.0;
      data[idx] += omega * (target - data[idx]);
    }
  }
}

void sor_sweep_omp(const StencilGrid& g, std::span<double> u, double omega) {
  double* data = u.data();
  for (const auto* color : {&g.red, &g.black}) {
    const auto n = static_cast<std::int64_t>(color->size());
    const std::size_t* sites = color->data();
#pragma omp parallel for schedule(static) if (static_cast<std::size_t>(n) >= kParallelThreshold && !omp_in_parallel())
    for (std::int64_t i = 0; i < n; ++i) {
      const std::size_t idx = sites[i];
      const double target = stencil_mean(data, idx, g.offsets) + 1.0;
      data[idx] += omega * (target - data[idx]);
    }
  }
}

double max_residual_serial(const StencilGrid& g, std::span<const double> u) {
  double worst = 0.0;
  for (const auto* color : {&g.red, &g.black}) {
    for (const std::size_t idx : *color) {
      worst = std::max(worst, std::abs(stencil_mean(u.data(), idx, g.offsets) - u[idx] + 1.0));
    }
  }
  return worst;
}

double max_residual_omp(const StencilGrid& g, std::span<const double> u) {
  double worst = 0.0;
  for (const auto* color : {&g.red, &g.black}) {
    const auto n = static_cast<std::int64_t>(color->size());
    const std::size_t* sites = color->data();
#pragma omp parallel for reduction(max : worst) schedule(static) if (static_cast<std::size_t>(n) >= kParallelThreshold && !omp_in_parallel())
    for (std::int64_t i = 0; i < n; ++i) {
      const std::size_t idx = sites[i];
      worst = std::max(worst, std::abs(stencil_mean(u.data(), idx, g.offsets) - u[idx] + 1.0));
    }
  }
  return worst;
}

}  // namespace rotorlab::kernels
