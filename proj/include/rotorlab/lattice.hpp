#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace rotorlab {

inline constexpr int kMaxDim = 4;

/// A site of Z^d, 1 <= d <= 4. Coordinates past `dim()` are held at zero so
/// the defaulted ordering is lexicographic over the used coordinates.
class Point {
 public:
  Point() = default;
  explicit Point(int d);
  Point(std::initializer_list<std::int32_t> coords);

  static Point origin(int d) { return Point(d); }

  int dim() const { return dim_; }
  std::int32_t operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::int32_t& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  std::span<const std::int32_t> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  bool is_origin() const;
  std::int64_t norm2() const;
  double norm() const;
  std::int32_t norm_inf() const;

  Point operator+(const Point& o) const;
  Point operator-(const Point& o) const;

  auto operator<=>(const Point&) const = default;
  bool operator==(const Point&) const = default;

  std::string str() const;

 private:
  std::array<std::int32_t, kMaxDim> c_{};
  std::int32_t dim_ = 0;
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};

/// One of the 2d unit steps +e_axis or -e_axis.
///
/// Directions have a fixed index used everywhere a rotor order is written
/// down: +e_1, ..., +e_d occupy 0..d-1 and -e_1, ..., -e_d occupy d..2d-1.
struct Direction {
  int axis = 0;
  int sign = 1;

  int index(int d) const { return sign > 0 ? axis : d + axis; }
  static Direction from_index(int idx, int d) {
    return idx < d ? Direction{idx, 1} : Direction{idx - d, -1};
  }

  bool operator==(const Direction&) const = default;

  /// "+1".."+d" / "-1".."-d" (1-based axes).
  std::string str() const;
  /// Accepts "+k"/"-k" and, for d == 2, the compass letters N, E, S, W.
  static Direction parse(const std::string& text, int d);
};

Point step(const Point& x, Direction dir);

/// x + e_1, ..., x + e_d, x - e_1, ..., x - e_d.
std::vector<Point> neighbors(const Point& x);

/// Volume of the Euclidean unit ball in R^d.
double unit_ball_volume(int d);

/// Finite set of sites with O(1) membership and a cached bounding box.
class Region {
 public:
  using Set = std::unordered_set<Point, PointHash>;
  using const_iterator = Set::const_iterator;

  explicit Region(int d = 2);
  Region(int d, std::span<const Point> sites);
  Region(int d, std::initializer_list<Point> sites);

  int dim() const { return dim_; }
  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }
  bool contains(const Point& x) const { return sites_.count(x) != 0; }

  bool insert(const Point& x);
  bool erase(const Point& x);

  /// Bounding box corners; only meaningful for a nonempty region.
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }

  const_iterator begin() const { return sites_.begin(); }
  const_iterator end() const { return sites_.end(); }

  /// Sites in lexicographic order.
  std::vector<Point> sorted() const;

  Region translated(const Point& v) const;

  bool operator==(const Region& o) const { return dim_ == o.dim_ && sites_ == o.sites_; }

 private:
  void recompute_box();

  int dim_;
  Set sites_;
  Point lo_;
  Point hi_;
};

/// { x not in A : x ~ y for some y in A }.
Region boundary(const Region& a);

/// B_n = { y : omega_d * |y|^d < n }.
Region lattice_ball(std::int64_t n, int d);

/// True iff omega_d * |y|^d < n.
bool in_lattice_ball(const Point& y, std::int64_t n);

/// L-infinity ball of radius r about x.
Region cube(const Point& x, int r);

bool in_orthant(const Point& x, const Point& base);

/// Dense row-major indexing of an axis-aligned box [lo, hi] of Z^d.
class BoxIndex {
 public:
  BoxIndex() = default;
  BoxIndex(const Point& lo, const Point& hi);

  int dim() const { return lo_.dim(); }
  std::size_t size() const { return size_; }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  std::int64_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }

  bool inside(const Point& x) const;
  std::size_t index(const Point& x) const;
  Point point(std::size_t idx) const;

 private:
  Point lo_;
  Point hi_;
  std::array<std::int64_t, kMaxDim> extent_{};
  std::array<std::int64_t, kMaxDim> stride_{};
  std::size_t size_ = 0;
};

}  // namespace rotorlab
