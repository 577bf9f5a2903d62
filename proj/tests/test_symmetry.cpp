#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <set>

#include "rotorlab/exittime.hpp"
#include "rotorlab/symmetry.hpp"

using namespace rotorlab;

namespace {

// --- independent polyomino oracle -----------------------------------------
// Fixed polyominoes as sorted cell lists normalized by translation, grown
// cell by cell; free counts then follow from Burnside counting over the 8
// symmetries of the square, without any canonical-form machinery.
using Cells = std::vector<std::pair<int, int>>;

Cells normalize(Cells c) {
  int mx = c[0].first, my = c[0].second;
  for (auto [x, y] : c) {
    mx = std::min(mx, x);
    my = std::min(my, y);
  }
  for (auto& [x, y] : c) {
    x -= mx;
    y -= my;
  }
  std::sort(c.begin(), c.end());
  return c;
}

std::set<Cells> fixed_polyominoes(int n) {
  std::set<Cells> level{{{0, 0}}};
  for (int k = 2; k <= n; ++k) {
    std::set<Cells> next;
    for (const auto& c : level) {
      for (auto [x, y] : c) {
        for (auto [dx, dy] : {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}}) {
          std::pair<int, int> q{x + dx, y + dy};
          if (std::find(c.begin(), c.end(), q) != c.end()) continue;
          Cells g = c;
          g.push_back(q);
          next.insert(normalize(g));
        }
      }
    }
    level = std::move(next);
  }
  return level;
}

std::size_t burnside_free_count(int n) {
  const auto fixed = fixed_polyominoes(n);
  std::size_t total = 0;
  for (int g = 0; g < 8; ++g) {
    for (const auto& c : fixed) {
      Cells img;
      for (auto [x, y] : c) {
        int a = x, b = y;
        if (g & 1) std::swap(a, b);
        if (g & 2) a = -a;
        if (g & 4) b = -b;
        img.emplace_back(a, b);
      }
      total += normalize(img) == c;
    }
  }
  return total / 8;
}

Region apply(const Region& a, int perm_swap, int signs, const Point& shift) {
  Region out(a.dim());
  for (const auto& x : a) {
    Point y = x;
    if (perm_swap) std::swap(y[0], y[1]);
    for (int i = 0; i < a.dim(); ++i) {
      if ((signs >> i) & 1) y[i] = -y[i];
    }
    out.insert(y + shift);
  }
  return out;
}

}  // namespace

TEST_CASE("steiner symmetrization examples") {
  // axis index 1 is the second coordinate
  CHECK(steiner(Region(2, {Point{0, 0}, Point{0, 2}}), 1) == Region(2, {Point{0, 0}, Point{0, 1}}));
  const Region centered(2, {Point{0, -1}, Point{0, 0}, Point{0, 1}, Point{0, 2}});
  CHECK(steiner(centered, 1) == centered);
  CHECK(steiner(Region(2, {Point{0, -3}}), 1) == Region(2, {Point{0, 0}}));
  CHECK(steiner(Region(1, {Point{4}, Point{9}}), 0) == Region(1, {Point{0}, Point{1}}));
}

TEST_CASE("column decomposition reconstructs the region") {
  const Region a(3, {Point{0, 0, 0}, Point{0, 0, 3}, Point{1, 2, 3}, Point{-1, 0, 0}});
  for (int axis = 0; axis < 3; ++axis) {
    const auto cd = columns(a, axis);
    CHECK(cd.reconstruct(3) == a);
    for (const auto& [base, offs] : cd.columns) CHECK(base[axis] == 0);
  }
}

TEST_CASE("orthoconvexity") {
  CHECK(is_orthoconvex(lattice_ball(300, 2)));
  CHECK(is_orthoconvex(lattice_ball(300, 3)));
  CHECK_FALSE(is_orthoconvex(Region(2, {Point{0, 0}, Point{2, 0}})));
  CHECK(is_orthoconvex(Region(2, {Point{0, 0}, Point{1, 0}, Point{0, 1}})));
  CHECK_FALSE(is_orthoconvex(Region(2, {Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{1, 2}, Point{0, 2}})));
}

TEST_CASE("xi in exact quarters") {
  CHECK(xi(Region(2, {Point{0, 0}})) == 0.5);
  const Region a(2, {Point{0, 0}, Point{0, 2}});
  CHECK(xi(a) == 3.0);
  CHECK(xi(steiner(a, 1)) == 2.0);
  CHECK(xi_quarters(a) == 12);
}

TEST_CASE("xi can rise when a column is shifted onto the positive side") {
  // A column {-1, 0} symmetrizes to {0, 1}: sum |x + 1/4| goes from 1 to 3/2,
  // while sum |x - 1/4| falls from 3/2 to 1.
  const Region a(1, {Point{-1}, Point{0}});
  const Region s = steiner(a, 0);
  CHECK(s == Region(1, {Point{0}, Point{1}}));
  CHECK(xi_quarters(s) > xi_quarters(a));
  CHECK(centering_potential_quarters(s) < centering_potential_quarters(a));
}

TEST_CASE("symmetrization steps over enumerated shapes") {
  for (std::int64_t n = 1; n <= 7; ++n) {
    for (const auto& a : enumerate_connected(n, 2)) {
      for (int axis = 0; axis < 2; ++axis) {
        const Region s = steiner(a, axis);
        CHECK(s.size() == a.size());
        if (s == a) {
          CHECK(xi_quarters(s) == xi_quarters(a));
        } else {
          CHECK(xi_quarters(s) < xi_quarters(a));
          CHECK(centering_potential_quarters(s) < centering_potential_quarters(a));
        }
      }
      const Region f = symmetrize_to_fixpoint(a);
      CHECK(is_orthoconvex(f));
      for (int axis = 0; axis < 2; ++axis) CHECK(steiner(f, axis) == f);
    }
  }
}

TEST_CASE("potential drops on arbitrary translates too") {
  for (const auto& a0 : enumerate_connected(6, 2)) {
    for (const Point v : {Point{-3, -2}, Point{-1, 4}, Point{2, -5}}) {
      const Region a = a0.translated(v);
      for (int axis = 0; axis < 2; ++axis) {
        const Region s = steiner(a, axis);
        if (s == a) continue;
        CHECK(centering_potential_quarters(s) <= centering_potential_quarters(a) - 2);
      }
    }
  }
}

TEST_CASE("symmetrize to a fixed point") {
  const Region b = lattice_ball(200, 2);
  CHECK(symmetrize_to_fixpoint(b) == b);
  const Region tromino(2, {Point{5, 0}, Point{5, 1}, Point{5, 2}});
  CHECK(symmetrize_to_fixpoint(tromino) == Region(2, {Point{0, -1}, Point{0, 0}, Point{0, 1}}));
}

TEST_CASE("enumeration counts") {
  const std::vector<std::size_t> free2{1, 1, 2, 5, 12, 35, 108, 369, 1285, 4655};
  for (int n = 1; n <= 10; ++n) CHECK(enumerate_connected(n, 2).size() == free2[static_cast<std::size_t>(n - 1)]);
  for (int n = 1; n <= 8; ++n) CHECK(enumerate_connected(n, 2).size() == burnside_free_count(n));
  // polycubes up to rotations and reflections
  const std::vector<std::size_t> free3{1, 1, 2, 7, 23, 112};
  for (int n = 1; n <= 6; ++n) CHECK(enumerate_connected(n, 3).size() == free3[static_cast<std::size_t>(n - 1)]);
  for (int n = 1; n <= 50; n += 7) CHECK(enumerate_connected(n, 1).size() == 1);
  CHECK_THROWS_AS(enumerate_connected(11, 2), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_connected(7, 3), std::invalid_argument);
}

TEST_CASE("enumerated shapes are connected, distinct and canonical") {
  const auto shapes = enumerate_connected(7, 2);
  std::set<std::vector<Point>> keys;
  for (const auto& a : shapes) {
    CHECK(a.size() == 7);
    CHECK(is_connected(a));
    CHECK(canonical_form(a) == a);
    keys.insert(a.sorted());
  }
  CHECK(keys.size() == shapes.size());
}

TEST_CASE("canonical form ignores translations and point symmetries") {
  for (const auto& a : enumerate_connected(6, 2)) {
    const auto key = canonical_key(a);
    for (int swap = 0; swap < 2; ++swap) {
      for (int signs = 0; signs < 4; ++signs) CHECK(canonical_key(apply(a, swap, signs, Point{7, -3})) == key);
    }
  }
  CHECK(is_connected(Region(2, {Point{0, 0}, Point{1, 1}})) == false);
}

TEST_CASE("row strings") {
  const Region l(2, {Point{0, 0}, Point{1, 0}, Point{0, 1}});
  CHECK(to_rle(l) == "o$2o!");
  CHECK(to_rle(Region(2, {Point{0, 0}, Point{2, 0}})) == "obo!");
  CHECK(to_rle(Region(1, {Point{0}, Point{1}, Point{3}})) == "2obo!");
  CHECK(from_rle("o$2o!", 2) == l);
  CHECK(from_rle("bo$3o$bo!", 2).size() == 5);
  for (const auto& a : enumerate_connected(6, 2)) CHECK(from_rle(to_rle(a), 2) == a);
  for (const auto& a : enumerate_connected(5, 3)) CHECK(from_rle(to_rle(a), 3) == a);
  const Region gap(2, {Point{0, 0}, Point{0, 2}});
  CHECK(to_rle(gap) == "o$$o!");
  CHECK(from_rle(to_rle(gap), 2) == gap);
  CHECK_THROWS(from_rle("o$o", 2));
  CHECK_THROWS(from_rle("oxo!", 2));
}

TEST_CASE("exit time does not decrease under symmetrization (small shapes)") {
  for (std::int64_t n = 1; n <= 6; ++n) {
    for (const auto& a : enumerate_connected(n, 2)) {
      const double e = max_exit(solve_exit(a));
      for (int axis = 0; axis < 2; ++axis) CHECK(max_exit(solve_exit(steiner(a, axis))) >= e - 1e-8);
    }
  }
}
