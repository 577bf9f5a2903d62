// Serial reference vs OpenMP for each parallel kernel. Thread count follows
// OMP_NUM_THREADS / ROTORLAB_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>

#include "rotorlab/engine.hpp"
#include "rotorlab/kernels.hpp"
#include "rotorlab/rng.hpp"

using namespace rotorlab;
using namespace rotorlab::kernels;

namespace {

const Region& ball_region() {
  static const Region a = lattice_ball(200000, 2);
  return a;
}

const StencilGrid& ball_grid() {
  static const StencilGrid g = StencilGrid::build(ball_region());
  return g;
}

template <bool Parallel>
void BM_SorSweep(benchmark::State& state) {
  const StencilGrid& g = ball_grid();
  std::vector<double> u(g.box.size(), 0.0);
  for (auto _ : state) {
    if constexpr (Parallel) {
      sor_sweep_omp(g, u, 1.9);
    } else {
      sor_sweep_serial(g, u, 1.9);
    }
    benchmark::DoNotOptimize(u.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.red.size() + g.black.size()));
}

template <bool Parallel>
void BM_Residual(benchmark::State& state) {
  const StencilGrid& g = ball_grid();
  std::vector<double> u(g.box.size(), 1.0);
  for (auto _ : state) {
    const double r = Parallel ? max_residual_omp(g, u) : max_residual_serial(g, u);
    benchmark::DoNotOptimize(r);
  }
}

template <bool Parallel>
void BM_BallOverlap(benchmark::State& state) {
  const std::vector<Point> centers = ball_region().sorted();
  const double radius = std::sqrt(200000.0 / std::acos(-1.0));
  for (auto _ : state) {
    const double v = Parallel ? ball_overlap_volume_omp(centers, radius, 1e-6, 12)
                              : ball_overlap_volume_serial(centers, radius, 1e-6, 12);
    benchmark::DoNotOptimize(v);
  }
}

template <bool Parallel>
void BM_Trials(benchmark::State& state) {
  // exit walks from the center of a radius-20 square
  auto trial = [](std::uint64_t t) {
    Stream s(3, t);
    int x = 0, y = 0;
    double steps = 0;
    while (std::abs(x) <= 20 && std::abs(y) <= 20) {
      switch (s.below(4)) {
        case 0: ++x; break;
        case 1: ++y; break;
        case 2: --x; break;
        default: --y; break;
      }
      ++steps;
    }
    return steps;
  };
  std::vector<double> out(4096);
  for (auto _ : state) {
    if constexpr (Parallel) {
      run_trials_omp(trial, std::span<double>(out));
    } else {
      run_trials_serial(trial, std::span<double>(out));
    }
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_SorSweep<false>)->Name("sor_sweep/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SorSweep<true>)->Name("sor_sweep/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Residual<false>)->Name("residual/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Residual<true>)->Name("residual/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BallOverlap<false>)->Name("ball_overlap/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BallOverlap<true>)->Name("ball_overlap/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Trials<false>)->Name("mc_trials/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Trials<true>)->Name("mc_trials/omp")->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  apply_thread_cap();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
