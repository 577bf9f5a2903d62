#include "rotorlab/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rotorlab/kernels.hpp"

namespace rotorlab {

std::int64_t quadratic_weight(const Region& a) {
  std::int64_t s = 0;
  for (const auto& x : a) s += x.norm2();
  return s;
}

std::int64_t min_weight_of_cardinality(std::int64_t count, int d) {
  if (count <= 0) return 0;
  int r = static_cast<int>(std::ceil(std::pow(static_cast<double>(count) / unit_ball_volume(d), 1.0 / d))) + 1;
  for (;;) {
    // All sites with |y| <= r lie in the cube of radius r, so if at least
    // `count` of them exist the smallest `count` norms are among them.
    std::vector<std::int64_t> norms;
    const std::int64_t r2 = static_cast<std::int64_t>(r) * r;
    Point lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = -r;
      hi[i] = r;
    }
    const BoxIndex box(lo, hi);
    for (std::size_t k = 0; k < box.size(); ++k) {
      const std::int64_t s = box.point(k).norm2();
      if (s <= r2) norms.push_back(s);
    }
    if (static_cast<std::int64_t>(norms.size()) >= count) {
      std::nth_element(norms.begin(), norms.begin() + (count - 1), norms.end());
      std::int64_t total = 0;
      for (std::int64_t i = 0; i < count; ++i) total += norms[static_cast<std::size_t>(i)];
      return total;
    }
    r *= 2;
  }
}

std::int64_t sym_diff_count(const Region& a, std::int64_t n) {
  const Region ball = lattice_ball(n, a.dim());
  std::int64_t shared = 0;
  for (const auto& x : a) shared += ball.contains(x);
  return static_cast<std::int64_t>(a.size()) + static_cast<std::int64_t>(ball.size()) - 2 * shared;
}

double lebesgue_error(const Region& a, std::int64_t n, double tol, bool parallel) {
  if (n < 1) throw std::invalid_argument("lebesgue_error: n must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("lebesgue_error: tol must be positive");
  const int d = a.dim();
  // Unscaled: the unit-volume ball becomes the ball of volume n.
  const double rho = std::pow(static_cast<double>(n) / unit_ball_volume(d), 1.0 / d);
  const std::vector<Point> centers = a.sorted();
  constexpr int kDepthCap = 12;
  const double overlap = parallel ? kernels::ball_overlap_volume_omp(centers, rho, tol, kDepthCap)
                                  : kernels::ball_overlap_volume_serial(centers, rho, tol, kDepthCap);
  const double nn = static_cast<double>(n);
  const double err = static_cast<double>(a.size()) / nn + 1.0 - 2.0 * overlap / nn;
  return std::clamp(err, 0.0, 2.0);
}

Radii radii(const Region& a) {
  if (!a.contains(Point::origin(a.dim()))) throw std::invalid_argument("radii: the origin is not in A");
  Radii r;
  std::int64_t out2 = 0;
  for (const auto& x : a) out2 = std::max(out2, x.norm2());
  // The nearest site outside A is always adjacent to A.
  std::int64_t in2 = std::numeric_limits<std::int64_t>::max();
  for (const auto& y : boundary(a)) in2 = std::min(in2, y.norm2());
  r.inradius = std::sqrt(static_cast<double>(in2));
  r.outradius = std::sqrt(static_cast<double>(out2));
  return r;
}

std::int64_t weight_identity_defect(const AggState& agg) {
  const auto& policy = agg.policy();
  const int d = agg.dim();
  std::int64_t drift = 0;
  for (const auto& [x, m] : agg.odometer_entries()) {
    const auto counts = policy.direction_counts(x, m);
    for (int i = 0; i < d; ++i) {
      const auto net = static_cast<std::int64_t>(counts[static_cast<std::size_t>(i)]) -
                       static_cast<std::int64_t>(counts[static_cast<std::size_t>(d + i)]);
      drift += net * x[i];
    }
  }
  std::int64_t psi = 0;
  for (const auto& x : agg.sites()) psi += x.norm2();
  return static_cast<std::int64_t>(agg.total_steps()) + 2 * drift - psi;
}

double verify_weight_inequality(const AggState& agg, double discrepancy) {
  const int d = agg.dim();
  long double norms = 0.0L;
  std::int64_t psi = 0;
  for (const auto& x : agg.sites()) {
    norms += std::sqrt(static_cast<long double>(x.norm2()));
    psi += x.norm2();
  }
  const long double dd = discrepancy;
  const long double rhs = static_cast<long double>(agg.total_steps()) + 8.0L * std::sqrt(static_cast<long double>(d)) * dd * norms +
                          4.0L * d * dd * static_cast<long double>(agg.particles());
  return static_cast<double>(rhs - static_cast<long double>(psi));
}

MainPropRecord verify_mainprop(const AggState& agg, std::optional<double> phi_partial) {
  MainPropRecord r;
  const int d = agg.dim();
  r.n = static_cast<std::int64_t>(agg.particles());
  r.phi_partial = phi_partial;
  if (r.n == 0) return r;
  for (const auto& x : agg.sites()) r.psi += x.norm2();
  r.psi_ball = quadratic_weight(lattice_ball(r.n, d));
  r.excess = r.psi - r.psi_ball;
  r.normalized = static_cast<double>(r.excess) / std::pow(static_cast<double>(r.n), 1.0 + 1.0 / d);
  r.min_weight = min_weight_of_cardinality(r.n, d);
  r.ball_minimizes = r.psi >= r.min_weight;
  return r;
}

ShapeReport shape_report(const Region& a, std::uint64_t total_steps, double tol) {
  ShapeReport s;
  s.n = static_cast<std::int64_t>(a.size());
  s.psi = quadratic_weight(a);
  s.psi_ball = quadratic_weight(lattice_ball(s.n, a.dim()));
  s.sym_diff = sym_diff_count(a, s.n);
  s.lebesgue_error = lebesgue_error(a, s.n, tol);
  const Radii r = radii(a);
  s.inradius = r.inradius;
  s.outradius = r.outradius;
  s.total_steps = total_steps;
  return s;
}

double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_exponent: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit_exponent: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace rotorlab
