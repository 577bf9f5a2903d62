#include "rotorlab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "rotorlab/kernels.hpp"
#include "rotorlab/rng.hpp"

namespace rotorlab {

namespace {

template <typename Trial>
MCEstimate run(Trial&& trial, std::uint64_t trials, std::uint64_t seed, bool parallel) {
  if (trials == 0) throw std::invalid_argument("Monte Carlo run needs at least one trial");
  std::vector<double> out(trials);
  if (parallel) {
    kernels::run_trials_omp(trial, std::span<double>(out));
  } else {
    kernels::run_trials_serial(trial, std::span<double>(out));
  }
  return summarize(out, seed);
}

void random_step(Point& x, Stream& s, int d) {
  const auto k = static_cast<int>(s.below(static_cast<std::uint32_t>(2 * d)));
  x[k < d ? k : k - d] += k < d ? 1 : -1;
}

bool in_nonneg_orthant(const Point& x) {
  for (int i = 0; i < x.dim(); ++i) {
    if (x[i] < 0) return false;
  }
  return true;
}

}  // namespace

MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed) {
  MCEstimate e;
  e.trials = values.size();
  e.seed = seed;
  if (values.empty()) return e;
  double sum = 0.0;
  for (const double v : values) sum += v;
  e.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - e.mean) * (v - e.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    e.stderr_ = std::sqrt(var / static_cast<double>(values.size()));
  }
  return e;
}

MCEstimate orthant_survival_from(const Point& start, int r, std::uint64_t trials, std::uint64_t seed, bool parallel) {
  const int d = start.dim();
  auto trial = [&](std::uint64_t t) -> double {
    Stream s(seed, t);
    Point x = start;
    // Hitting Q at the same time as leaving the cube counts as hitting Q.
    for (;;) {
      if (in_nonneg_orthant(x)) return 0.0;
      if (x.norm_inf() > r) return 1.0;
      random_step(x, s, d);
    }
  };
  return run(trial, trials, seed, parallel);
}

OrthantEstimate estimate_orthant_survival(int k, int r, int d, std::uint64_t trials, std::uint64_t seed,
                                          bool exhaustive, bool parallel) {
  if (k < 1 || r < 3 * k) throw std::invalid_argument("estimate_orthant_survival: need r >= 3k >= 3");
  if (exhaustive && k > 2) throw std::invalid_argument("estimate_orthant_survival: exhaustive starts need k <= 2");
  OrthantEstimate out;
  if (exhaustive) {
    const auto box = cube(Point::origin(d), k).sorted();
    out.starts = box;
  } else {
    for (int mask = 0; mask < (1 << d); ++mask) {
      Point c(d);
      for (int i = 0; i < d; ++i) c[i] = (mask >> i) & 1 ? -k : k;
      out.starts.push_back(c);
    }
    Point low(d);
    for (int i = 0; i < d; ++i) low[i] = -k;
    if (std::find(out.starts.begin(), out.starts.end(), low) == out.starts.end()) out.starts.push_back(low);
  }
  for (std::size_t i = 0; i < out.starts.size(); ++i) {
    const std::uint64_t sub = splitmix64(seed + 0x51ED27A1ULL * (i + 1));
    MCEstimate e = orthant_survival_from(out.starts[i], r, trials, sub, parallel);
    e.seed = seed;
    out.per_start.push_back(e);
    if (i == 0 || e.mean > out.best.mean) {
      out.best = e;
      out.argmax = out.starts[i];
    }
  }
  return out;
}

MCEstimate cube_exit_time(const Point& x0, int r, std::uint64_t trials, std::uint64_t seed, bool parallel) {
  if (r < 0) throw std::invalid_argument("cube_exit_time: r must be >= 0");
  const int d = x0.dim();
  auto trial = [&](std::uint64_t t) -> double {
    Stream s(seed, t);
    Point x = x0;
    std::uint64_t steps = 0;
    while ((x - x0).norm_inf() <= r) {
      random_step(x, s, d);
      ++steps;
    }
    return static_cast<double>(steps);
  };
  return run(trial, trials, seed, parallel);
}

MCEstimate empirical_exit(const Region& a, const Point& x0, std::uint64_t trials, std::uint64_t seed, bool parallel) {
  if (!a.contains(x0)) throw std::invalid_argument("empirical_exit: start " + x0.str() + " is not in A");
  const int d = a.dim();
  Point lo = a.lo(), hi = a.hi();
  const BoxIndex box(lo, hi);
  std::vector<std::uint8_t> mask(box.size(), 0);
  for (const auto& y : a) mask[box.index(y)] = 1;
  auto trial = [&](std::uint64_t t) -> double {
    Stream s(seed, t);
    Point x = x0;
    std::uint64_t steps = 0;
    while (box.inside(x) && mask[box.index(x)]) {
      random_step(x, s, d);
      ++steps;
    }
    return static_cast<double>(steps);
  };
  return run(trial, trials, seed, parallel);
}

}  // namespace rotorlab
