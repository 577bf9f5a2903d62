#pragma once

// Data-parallel inner loops. Every kernel has a serial reference twin with
// the same arithmetic order, so the OpenMP variant is checked against it
// bit for bit in the unit tests and timed against it in bench/.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rotorlab/lattice.hpp"

namespace rotorlab::kernels {

/// Sites of a region laid out on a dense box (the region's bounding box
/// grown by one), split by checkerboard color relative to the box corner.
struct StencilGrid {
  BoxIndex box;
  std::vector<std::uint8_t> inside;
  std::vector<std::size_t> red;
  std::vector<std::size_t> black;
  std::vector<std::int64_t> offsets;  // the 2d neighbor index offsets

  static StencilGrid build(const Region& a);
};

/// One red-black SOR sweep for  (1/2d) sum_{y~x} u(y) - u(x) = -1  on the
/// masked sites; u is zero off the mask and is never written there.
void sor_sweep_serial(const StencilGrid& g, std::span<double> u, double omega);
void sor_sweep_omp(const StencilGrid& g, std::span<double> u, double omega);

/// max over masked x of | (1/2d) sum_{y~x} u(y) - u(x) + 1 |.
double max_residual_serial(const StencilGrid& g, std::span<const double> u);
double max_residual_omp(const StencilGrid& g, std::span<const double> u);

/// Volume of the unit cube centered at `center` inside the ball of the given
/// radius about the origin. Cells entirely inside or outside are exact;
/// straddling cells are split into 2^d children until their volume drops to
/// `tol` or `max_depth` is reached, where the corner-sign fraction is used.
double cube_ball_overlap(const Point& center, double radius, double tol, int max_depth);

/// Sum of cube_ball_overlap over `centers`.
double ball_overlap_volume_serial(std::span<const Point> centers, double radius, double tol, int max_depth);
double ball_overlap_volume_omp(std::span<const Point> centers, double radius, double tol, int max_depth);

/// Fills out[t] = trial(t) for t in [0, out.size()). Trials must be pure
/// functions of t.
template <typename Trial, typename T>
void run_trials_serial(Trial&& trial, std::span<T> out) {
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = trial(static_cast<std::uint64_t>(t));
}

template <typename Trial, typename T>
void run_trials_omp(Trial&& trial, std::span<T> out) {
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t t = 0; t < n; ++t) out[static_cast<std::size_t>(t)] = trial(static_cast<std::uint64_t>(t));
}

/// Number of worker threads, capped by ROTORLAB_THREADS when it is set.
int configured_threads();
/// Applies ROTORLAB_THREADS to the OpenMP runtime.
void apply_thread_cap();

}  // namespace rotorlab::kernels
