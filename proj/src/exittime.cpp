#include "rotorlab/exittime.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <omp.h>

#include "rotorlab/symmetry.hpp"

namespace rotorlab {

namespace {

double optimal_omega(const Region& a) {
  // Jacobi spectral radius of the bounding box.
  double rho = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double len = static_cast<double>(a.hi()[i] - a.lo()[i] + 1);
    rho += std::cos(std::numbers::pi / (len + 1.0));
  }
  rho /= a.dim();
  return 2.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - rho * rho)));
}

std::int64_t budget_for(int d) {
  switch (d) {
    case 1: return 50;
    case 2: return 10;
    case 3: return 6;
    default: return 0;
  }
}

}  // namespace

ExitField::ExitField(Region a, kernels::StencilGrid grid, std::vector<double> values, double residual,
                     std::uint64_t sweeps)
    : region_(std::move(a)), grid_(std::move(grid)), values_(std::move(values)), residual_(residual), sweeps_(sweeps) {}

double ExitField::at(const Point& x) const {
  if (!grid_.box.inside(x)) return 0.0;
  return values_[grid_.box.index(x)];
}

double ExitField::sum() const {
  double s = 0.0;
  for (const auto* color : {&grid_.red, &grid_.black}) {
    for (const std::size_t idx : *color) s += values_[idx];
  }
  return s;
}

ExitField solve_exit(const Region& a, const SolveOptions& options) {
  if (a.empty()) throw std::invalid_argument("solve_exit: region is empty");
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve_exit: tolerance must be positive");
  auto grid = kernels::StencilGrid::build(a);
  std::vector<double> u(grid.box.size(), 0.0);
  const double omega = options.omega > 0.0 ? options.omega : optimal_omega(a);
  const bool par = options.parallel && !omp_in_parallel();
  const int check_every = std::max(1, options.check_every);

  double residual = par ? kernels::max_residual_omp(grid, u) : kernels::max_residual_serial(grid, u);
  std::uint64_t sweeps = 0;
  while (residual > options.tol) {
    if (sweeps >= options.max_sweeps) throw SolverDidNotConverge(residual, sweeps);
    for (int k = 0; k < check_every; ++k) {
      if (par) {
        kernels::sor_sweep_omp(grid, u, omega);
      } else {
        kernels::sor_sweep_serial(grid, u, omega);
      }
    }
    sweeps += static_cast<std::uint64_t>(check_every);
    residual = par ? kernels::max_residual_omp(grid, u) : kernels::max_residual_serial(grid, u);
  }
  return ExitField(a, std::move(grid), std::move(u), residual, sweeps);
}

double max_exit(const ExitField& field) {
  double m = 0.0;
  const auto& g = field.grid();
  for (const auto* color : {&g.red, &g.black}) {
    for (const std::size_t idx : *color) m = std::max(m, field.raw()[idx]);
  }
  return m;
}

double ball_exit_asymptotic(std::int64_t n, int d) {
  if (n < 1) throw std::invalid_argument("ball_exit_asymptotic: n must be >= 1");
  return std::pow(static_cast<double>(n) / unit_ball_volume(d), 2.0 / d);
}

double gradient_sum(const ExitField& field) {
  const auto& g = field.grid();
  const auto& u = field.raw();
  const int d = field.dim();
  double total = 0.0;
  for (std::size_t idx = 0; idx < g.box.size(); ++idx) {
    const Point x = g.box.point(idx);
    for (int i = 0; i < d; ++i) {
      if (x[i] == g.box.hi()[i]) continue;
      const std::size_t j = idx + static_cast<std::size_t>(g.box.stride(i));
      if (g.inside[idx] || g.inside[j]) total += std::abs(u[idx] - u[j]);
    }
  }
  return total;
}

double isoperimetric_gamma(int d) {
  if (d == 1) return 1.0;
  if (d == 2) return 1.0 / 3.0;
  return std::pow(2.0, -d) / (2.0 * d * d * std::log(3.0));
}

IsoReport brute_force_phi(std::int64_t n, int d, double tol) {
  if (n < 1) throw std::invalid_argument("brute_force_phi: n must be >= 1");
  if (n > budget_for(d)) {
    throw std::invalid_argument("brute_force_phi: n = " + std::to_string(n) + " exceeds the enumeration budget for d = " +
                                std::to_string(d) + " (max " + std::to_string(budget_for(d)) + ")");
  }
  const std::vector<Region> shapes = enumerate_connected(n, d);
  std::vector<double> best(shapes.size(), 0.0);
  const auto count = static_cast<std::int64_t>(shapes.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < count; ++i) {
    SolveOptions o;
    o.tol = tol;
    o.parallel = false;
    best[static_cast<std::size_t>(i)] = max_exit(solve_exit(shapes[static_cast<std::size_t>(i)], o));
  }

  IsoReport r;
  r.n = n;
  r.d = d;
  r.shapes = shapes.size();
  std::size_t arg = 0;
  for (std::size_t i = 1; i < best.size(); ++i) {
    if (best[i] > best[arg]) arg = i;
  }
  r.max_e = best[arg];
  r.argmax = shapes[arg];
  r.e_ball = solve_exit(lattice_ball(n, d), tol).at(Point::origin(d));
  r.phi_hat = r.max_e - r.e_ball;
  r.note = "connected regions only: e_x(A) depends only on the component of A containing x";
  return r;
}

PhiTable phi_table(std::int64_t n_max, int d, double tol) {
  PhiTable t;
  double acc = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    t.rows.push_back(brute_force_phi(n, d, tol));
    acc += t.rows.back().phi_hat;
    t.partial_sums.push_back(acc);
  }
  return t;
}

ExitIdentity verify_exit_identity(const AggState& agg, const ExitField& field) {
  ExitIdentity out;
  const auto n = static_cast<double>(agg.particles());
  if (agg.particles() == 0) return out;
  const int d = agg.dim();
  const double predicted = n * field.at(Point::origin(d)) - field.sum();
  out.defect = std::abs(static_cast<double>(agg.total_steps()) - predicted);
  out.discrepancy = realized_discrepancy(agg.policy(), agg.odometer_entries());
  const double scale = out.discrepancy * std::pow(n, 1.0 + 1.0 / d);
  out.normalized = scale > 0.0 ? out.defect / scale : 0.0;
  out.bound = 2.0 * out.discrepancy * gradient_sum(field);
  return out;
}

}  // namespace rotorlab
