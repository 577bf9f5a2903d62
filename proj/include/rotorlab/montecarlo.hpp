#pragma once

#include <cstdint>
#include <vector>

#include "rotorlab/lattice.hpp"

namespace rotorlab {

struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample standard deviation / sqrt(trials)
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Mean and standard error of `values` summed in index order.
MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed);

struct OrthantEstimate {
  MCEstimate best;   // the largest per-start estimate
  Point argmax;      // the start it came from
  std::vector<Point> starts;
  std::vector<MCEstimate> per_start;
};

/// Estimates p(k, r) = sup over |x|_inf <= k of P_x(walk reaches |y|_inf > r
/// before the nonnegative orthant). Starts are the 2^d corners of the radius-k
/// cube plus (-k, ..., -k); `exhaustive` (k <= 2) uses every site of the cube.
/// `trials` walks are run from each start.
OrthantEstimate estimate_orthant_survival(int k, int r, int d, std::uint64_t trials, std::uint64_t seed,
                                          bool exhaustive = false, bool parallel = true);

/// Survival indicator mean from one start.
MCEstimate orthant_survival_from(const Point& start, int r, std::uint64_t trials, std::uint64_t seed,
                                 bool parallel = true);

/// Mean exit time of simple random walk from the cube C(x, r) started at x.
MCEstimate cube_exit_time(const Point& x, int r, std::uint64_t trials, std::uint64_t seed, bool parallel = true);

/// Mean exit time of simple random walk from A started at x. Throws
/// std::invalid_argument if x is not in A.
MCEstimate empirical_exit(const Region& a, const Point& x, std::uint64_t trials, std::uint64_t seed,
                          bool parallel = true);

}  // namespace rotorlab
