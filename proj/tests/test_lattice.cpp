#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "rotorlab/lattice.hpp"

using namespace rotorlab;

namespace {

std::set<Point> as_set(const Region& a) { return {a.begin(), a.end()}; }

}  // namespace

TEST_CASE("neighbors follow the +axes then -axes order") {
  CHECK(neighbors(Point{0}) == std::vector<Point>{Point{1}, Point{-1}});
  CHECK(neighbors(Point{0, 0}) == std::vector<Point>{{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  CHECK(neighbors(Point{3, -2}) == std::vector<Point>{{4, -2}, {3, -1}, {2, -2}, {3, -3}});
  for (int d = 1; d <= 4; ++d) {
    Point x(d);
    for (int i = 0; i < d; ++i) x[i] = 7 * i - 3;
    const auto nb = neighbors(x);
    CHECK(nb.size() == static_cast<std::size_t>(2 * d));
    for (const auto& y : nb) CHECK((y - x).norm2() == 1);
  }
}

TEST_CASE("direction indices and compass names") {
  for (int d = 1; d <= 4; ++d) {
    for (int k = 0; k < 2 * d; ++k) CHECK(Direction::from_index(k, d).index(d) == k);
  }
  CHECK(Direction::parse("N", 2) == Direction{1, 1});
  CHECK(Direction::parse("E", 2) == Direction{0, 1});
  CHECK(Direction::parse("S", 2) == Direction{1, -1});
  CHECK(Direction::parse("W", 2) == Direction{0, -1});
  CHECK(Direction::parse("-3", 3) == Direction{2, -1});
  CHECK(Direction{2, -1}.str() == "-3");
  CHECK_THROWS(Direction::parse("+3", 2));
  CHECK(step(Point{1, 1}, Direction{1, -1}) == Point{1, 0});
}

TEST_CASE("boundary") {
  CHECK(as_set(boundary(Region(1, {Point{0}}))) == std::set<Point>{Point{-1}, Point{1}});
  CHECK(boundary(Region(2, {Point{0, 0}})).size() == 4);
  // by hand: left, right, and the two above and below each site
  const std::set<Point> expect{{-1, 0}, {2, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}};
  const Region dom(2, {Point{0, 0}, Point{1, 0}});
  CHECK(as_set(boundary(dom)) == expect);
  const Region b = lattice_ball(200, 2);
  for (const auto& y : boundary(b)) CHECK_FALSE(b.contains(y));
}

TEST_CASE("lattice ball uses the strict inequality") {
  CHECK(as_set(lattice_ball(1, 2)) == std::set<Point>{{0, 0}});
  const Region b4 = lattice_ball(4, 2);
  CHECK(b4.size() == 5);
  CHECK(as_set(b4) == std::set<Point>{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  // n = pi exactly is never an integer, but n = 4 puts |y|^2 = 1 inside and 2 outside.
  CHECK_FALSE(lattice_ball(4, 2).contains(Point{1, 1}));
  CHECK(lattice_ball(7, 2).contains(Point{1, 1}));  // 2 pi < 7
  CHECK_FALSE(lattice_ball(6, 2).contains(Point{1, 1}));  // 2 pi > 6
}

TEST_CASE("lattice ball cardinality against an independent count") {
  for (const int d : {2, 3}) {
    for (const std::int64_t n : {100, 1000, 10000}) {
      // independent count: |y| < (n / omega_d)^{1/d}, compared in squared form
      const double omega = d == 2 ? std::numbers::pi : 4.0 * std::numbers::pi / 3.0;
      const long double rho2 = std::pow(static_cast<long double>(n) / omega, 2.0L / d);
      const int r = static_cast<int>(std::sqrt(static_cast<double>(rho2))) + 1;
      std::int64_t count = 0;
      for (int x = -r; x <= r; ++x) {
        for (int y = -r; y <= r; ++y) {
          for (int z = (d == 3 ? -r : 0); z <= (d == 3 ? r : 0); ++z) {
            count += static_cast<long double>(x * x + y * y + z * z) < rho2;
          }
        }
      }
      const auto size = static_cast<std::int64_t>(lattice_ball(n, d).size());
      CHECK(size == count);
      const double c = std::abs(static_cast<double>(size - n)) / std::pow(static_cast<double>(n), 1.0 - 1.0 / d);
      MESSAGE("d=" << d << " n=" << n << " |B_n|=" << size << " fitted C=" << c);
      CHECK(c < 3.0);
    }
  }
  CHECK(static_cast<double>(lattice_ball(100000, 2).size()) / 100000.0 == doctest::Approx(1.0).epsilon(0.002));
}

TEST_CASE("lattice ball is invariant under signed coordinate permutations") {
  const Region b = lattice_ball(500, 3);
  for (const auto& x : b) {
    CHECK(b.contains(Point{-x[0], x[1], x[2]}));
    CHECK(b.contains(Point{x[1], x[0], x[2]}));
    CHECK(b.contains(Point{x[2], x[1], -x[0]}));
  }
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
  CHECK(unit_ball_volume(4) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0));
}

TEST_CASE("cubes and orthants") {
  CHECK(cube(Point{0, 0}, 0).size() == 1);
  CHECK(cube(Point{0, 0}, 1).size() == 9);
  CHECK(cube(Point{0, 0, 0}, 2).size() == 125);
  CHECK(in_orthant(Point{0, 0}, Point{0, 0}));
  CHECK_FALSE(in_orthant(Point{-1, 5}, Point{0, 0}));
  CHECK(in_orthant(Point{2, 3}, Point{1, 1}));
}

TEST_CASE("region bookkeeping") {
  Region a(2);
  CHECK(a.insert(Point{2, -1}));
  CHECK_FALSE(a.insert(Point{2, -1}));
  CHECK(a.insert(Point{-3, 4}));
  CHECK(a.size() == 2);
  CHECK(a.lo() == Point{-3, -1});
  CHECK(a.hi() == Point{2, 4});
  CHECK(a.erase(Point{-3, 4}));
  CHECK(a.lo() == Point{2, -1});
  CHECK(a.translated(Point{1, 1}).contains(Point{3, 0}));
  CHECK(Region(2, {Point{0, 1}, Point{0, 0}}).sorted() == std::vector<Point>{{0, 0}, {0, 1}});
}

TEST_CASE("box index round trip") {
  const BoxIndex box(Point{-2, 3, -1}, Point{1, 5, 0});
  CHECK(box.size() == 4 * 3 * 2);
  for (std::size_t i = 0; i < box.size(); ++i) CHECK(box.index(box.point(i)) == i);
  CHECK(box.inside(Point{1, 5, 0}));
  CHECK_FALSE(box.inside(Point{2, 5, 0}));
}
