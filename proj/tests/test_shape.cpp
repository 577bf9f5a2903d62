#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rotorlab/engine.hpp"
#include "rotorlab/rng.hpp"
#include "rotorlab/rotors.hpp"
#include "rotorlab/shape.hpp"

using namespace rotorlab;

namespace {

// psi(B_n) over its continuum leading term d n^{1+2/d} / ((d+2) omega_d^{2/d}).
double ball_weight_normalized(std::int64_t n, int d) {
  const double w = unit_ball_volume(d);
  const auto nn = static_cast<double>(n);
  return static_cast<double>(quadratic_weight(lattice_ball(n, d))) * (d + 2) * std::pow(w, 2.0 / d) /
         (d * std::pow(nn, 1.0 + 2.0 / d));
}

// Plain Monte Carlo estimate of |A^cube sym-diff B| in lattice units (the
// ball has volume n), sampled over the bounding box of both sets.
double mc_sym_diff_volume(const Region& a, std::int64_t n, std::uint64_t samples) {
  const int d = a.dim();
  const double rho = std::pow(static_cast<double>(n) / unit_ball_volume(d), 1.0 / d);
  double lo = -rho, hi = rho;
  for (const auto& x : a) {
    for (int i = 0; i < d; ++i) {
      lo = std::min(lo, x[i] - 0.5);
      hi = std::max(hi, x[i] + 0.5);
    }
  }
  Stream s(2024);
  std::uint64_t hits = 0;
  std::vector<double> u(static_cast<std::size_t>(d));
  for (std::uint64_t k = 0; k < samples; ++k) {
    double r2 = 0.0;
    Point cell(d);
    for (int i = 0; i < d; ++i) {
      u[static_cast<std::size_t>(i)] = lo + (hi - lo) * s.uniform();
      r2 += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
      cell[i] = static_cast<std::int32_t>(std::floor(u[static_cast<std::size_t>(i)] + 0.5));
    }
    hits += (r2 < rho * rho) != a.contains(cell);
  }
  return std::pow(hi - lo, d) * static_cast<double>(hits) / static_cast<double>(samples);
}

Region swap_axes(const Region& a) {
  Region out(a.dim());
  for (const auto& x : a) out.insert(Point{x[1], x[0]});
  return out;
}

}  // namespace

TEST_CASE("quadratic weight examples") {
  CHECK(quadratic_weight(Region(2, {Point{0, 0}})) == 0);
  CHECK(quadratic_weight(lattice_ball(4, 2)) == 4);
  CHECK(quadratic_weight(Region(3, {Point{1, 2, -2}, Point{0, 0, 1}})) == 10);
  CHECK(min_weight_of_cardinality(1, 2) == 0);
  CHECK(min_weight_of_cardinality(5, 2) == 4);
  CHECK(min_weight_of_cardinality(9, 2) == 12);
  CHECK(min_weight_of_cardinality(7, 3) == 6);
  for (const std::int64_t n : {10, 100, 1000, 5000}) {
    const Region b = lattice_ball(n, 2);
    CHECK(min_weight_of_cardinality(static_cast<std::int64_t>(b.size()), 2) == quadratic_weight(b));
  }
}

TEST_CASE("ball weight against its leading term") {
  for (const int d : {2, 3}) {
    const double r = ball_weight_normalized(100000, d);
    MESSAGE("d=" << d << ": normalized psi(B_1e5) = " << r);
    CHECK(r >= 0.95);
    CHECK(r <= 1.05);
  }
}

TEST_CASE("symmetric difference counts") {
  CHECK(sym_diff_count(lattice_ball(4, 2), 4) == 0);
  Region a = lattice_ball(4, 2);
  a.erase(Point{1, 0});
  a.insert(Point{1, 1});
  CHECK(sym_diff_count(a, 4) == 2);
  CHECK(sym_diff_count(Region(2, {Point{5, 5}}), 1) == 2);
}

TEST_CASE("Lebesgue error of a single cell against Monte Carlo integration") {
  const Region one(2, {Point{0, 0}});
  const double exact = lebesgue_error(one, 1);
  const double mc = mc_sym_diff_volume(one, 1, 1000000);
  MESSAGE("single cell: subdivision " << exact << ", Monte Carlo " << mc);
  CHECK(exact == doctest::Approx(mc).epsilon(0.01));
  // the square of side 1 and the disk of area 1 overlap in 4 corner slivers
  CHECK(exact > 0.0);
  CHECK(exact < 0.2);
  for (const auto& [a, n] : {std::pair{lattice_ball(50, 2), std::int64_t{50}},
                             std::pair{Region(2, {Point{0, 0}, Point{1, 0}, Point{2, 0}}), std::int64_t{3}},
                             std::pair{lattice_ball(40, 3), std::int64_t{40}}}) {
    const double e = lebesgue_error(a, n);
    const double m = mc_sym_diff_volume(a, n, 1000000) / static_cast<double>(n);
    CHECK(e == doctest::Approx(m).epsilon(0.03));
  }
}

TEST_CASE("Lebesgue error bounds") {
  CHECK(lebesgue_error(Region(2, {Point{100, 100}}), 1) == doctest::Approx(2.0));
  for (const std::int64_t n : {100, 1000, 10000}) {
    const Region b = lattice_ball(n, 2);
    const double e = lebesgue_error(b, n);
    MESSAGE("B_" << n << ": Lebesgue error " << e << ", times sqrt(n) " << e * std::sqrt(static_cast<double>(n)));
    CHECK(e <= 3.0 / std::sqrt(static_cast<double>(n)));
    // serial and parallel overlap sums agree exactly
    CHECK(lebesgue_error(b, n, 1e-6, false) == e);
    // a region with a few sites moved is off by at most the moved cells plus the ball's own error
    Region a = b;
    const auto far = static_cast<std::int32_t>(std::sqrt(static_cast<double>(n)) + 10);
    int moved = 0;
    for (const auto& x : b.sorted()) {
      if (moved == 5) break;
      a.erase(x);
      a.insert(Point{far + moved, 0});
      ++moved;
    }
    CHECK(lebesgue_error(a, n) <= e + 10.0 / static_cast<double>(n) + 1e-9);
  }
}

TEST_CASE("Lebesgue error ignores the labelling of axes") {
  const AggState s = aggregate(2000, RotorPolicy::nesw());
  const Region a = s.region();
  CHECK(lebesgue_error(a, 2000) == doctest::Approx(lebesgue_error(swap_axes(a), 2000)).epsilon(1e-9));
}

TEST_CASE("inradius and outradius") {
  const Radii r1 = radii(Region(2, {Point{0, 0}}));
  CHECK(r1.inradius == doctest::Approx(1.0));
  CHECK(r1.outradius == doctest::Approx(0.0));
  const Radii r4 = radii(lattice_ball(4, 2));
  CHECK(r4.inradius == doctest::Approx(std::sqrt(2.0)));
  CHECK(r4.outradius == doctest::Approx(1.0));
  CHECK_THROWS_AS(radii(Region(2, {Point{1, 0}})), std::invalid_argument);
  const Radii rb = radii(lattice_ball(10000, 2));
  const double rho = std::sqrt(10000.0 / std::numbers::pi);
  CHECK(rb.inradius >= rho - 1.0);
  CHECK(rb.outradius <= rho);
}

TEST_CASE("weight identity is exact for every policy family") {
  const std::vector<RotorPolicy> ps{RotorPolicy::nesw(),
                                    RotorPolicy::default_cyclic(1),
                                    RotorPolicy::default_cyclic(3),
                                    RotorPolicy::parse("cyclic order=+1,-2,-1,+2 offset=hash:3", 2),
                                    RotorPolicy::parse("scripted rule=palindrome", 2),
                                    RotorPolicy::parse("explicit prefix=N*7 cycle=N,E,S,W", 2)};
  for (const auto& p : ps) {
    for (const std::uint64_t n : {1ULL, 2ULL, 77ULL, 1000ULL}) CHECK(weight_identity_defect(aggregate(n, p)) == 0);
  }
  // a skipped rotor increment breaks the bookkeeping
  AggState faulty(RotorPolicy::nesw(), EngineFault{7});
  faulty.run_to(500);
  CHECK(weight_identity_defect(faulty) != 0);
}

TEST_CASE("weight inequality slack is nonnegative") {
  for (const auto& [p, n] : {std::pair{RotorPolicy::nesw(), 1000ULL}, std::pair{RotorPolicy::default_cyclic(2), 1000ULL},
                             std::pair{RotorPolicy::default_cyclic(3), 1000ULL}}) {
    const AggState s = aggregate(n, p);
    const double dd = realized_discrepancy(p, s.odometer_entries());
    CHECK(dd <= 1.0);
    CHECK(verify_weight_inequality(s, dd) >= 0.0);
  }
}

TEST_CASE("main proposition record") {
  const MainPropRecord one = verify_mainprop(aggregate(1, RotorPolicy::nesw()));
  CHECK(one.psi == 0);
  CHECK(one.excess == 0);
  CHECK(one.ball_minimizes);
  for (const std::uint64_t n : {10ULL, 100ULL, 3000ULL}) {
    const AggState s = aggregate(n, RotorPolicy::nesw());
    const MainPropRecord r = verify_mainprop(s, 0.5);
    CHECK(r.psi == quadratic_weight(s.region()));
    CHECK(r.psi >= r.min_weight);
    CHECK(r.ball_minimizes);
    CHECK(r.psi_ball == quadratic_weight(lattice_ball(static_cast<std::int64_t>(n), 2)));
    CHECK(r.phi_partial.value() == 0.5);
    MESSAGE("n=" << n << ": excess / n^{3/2} = " << r.normalized);
    CHECK(std::abs(r.normalized) < 1.0);
  }
}

TEST_CASE("shape report fields") {
  const AggState s = aggregate(500, RotorPolicy::nesw());
  const ShapeReport r = shape_report(s.region(), s.total_steps());
  CHECK(r.n == 500);
  CHECK(r.psi == quadratic_weight(s.region()));
  CHECK(r.sym_diff == sym_diff_count(s.region(), 500));
  CHECK(r.total_steps == s.total_steps());
  CHECK(r.inradius <= r.outradius + 1.0);
  CHECK(r.lebesgue_error == doctest::Approx(lebesgue_error(s.region(), 500)));
}

TEST_CASE("exponent fits") {
  std::vector<double> x, y;
  for (int k = 1; k <= 6; ++k) {
    x.push_back(std::pow(10.0, k));
    y.push_back(3.0 * std::pow(x.back(), -0.5));
  }
  CHECK(fit_exponent(x, y) == doctest::Approx(-0.5));
  CHECK_THROWS(fit_exponent({1.0}, {2.0}));
}
