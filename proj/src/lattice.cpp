#include "rotorlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rotorlab {

namespace {

void check_dim(int d) {
  if (d < 1 || d > kMaxDim) {
    throw std::invalid_argument("dimension must be in [1, 4], got " + std::to_string(d));
  }
}

}  // namespace

Point::Point(int d) : dim_(d) { check_dim(d); }

Point::Point(std::initializer_list<std::int32_t> coords) : dim_(static_cast<std::int32_t>(coords.size())) {
  check_dim(dim_);
  std::copy(coords.begin(), coords.end(), c_.begin());
}

bool Point::is_origin() const {
  return std::all_of(c_.begin(), c_.end(), [](std::int32_t v) { return v == 0; });
}

std::int64_t Point::norm2() const {
  std::int64_t s = 0;
  for (int i = 0; i < dim_; ++i) s += static_cast<std::int64_t>(c_[i]) * c_[i];
  return s;
}

double Point::norm() const { return std::sqrt(static_cast<double>(norm2())); }

std::int32_t Point::norm_inf() const {
  std::int32_t m = 0;
  for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(c_[i]));
  return m;
}

Point Point::operator+(const Point& o) const {
  Point r(*this);
  for (int i = 0; i < dim_; ++i) r.c_[i] += o.c_[i];
  return r;
}

Point Point::operator-(const Point& o) const {
  Point r(*this);
  for (int i = 0; i < dim_; ++i) r.c_[i] -= o.c_[i];
  return r;
}

std::string Point::str() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << c_[i];
  os << ')';
  return os.str();
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::uint64_t h = 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(p.dim() + 1);
  for (int i = 0; i < p.dim(); ++i) {
    h ^= static_cast<std::uint32_t>(p[i]);
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 31;
  }
  return static_cast<std::size_t>(h);
}

std::string Direction::str() const { return (sign > 0 ? "+" : "-") + std::to_string(axis + 1); }

Direction Direction::parse(const std::string& text, int d) {
  if (d == 2 && text.size() == 1) {
    switch (text[0]) {
      case 'N': return {1, 1};
      case 'E': return {0, 1};
      case 'S': return {1, -1};
      case 'W': return {0, -1};
      default: break;
    }
  }
  if (text.size() >= 2 && (text[0] == '+' || text[0] == '-')) {
    int axis = 0;
    try {
      axis = std::stoi(text.substr(1)) - 1;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad direction '" + text + "'");
    }
    if (axis < 0 || axis >= d) throw std::invalid_argument("direction axis out of range: '" + text + "'");
    return {axis, text[0] == '+' ? 1 : -1};
  }
  throw std::invalid_argument("bad direction '" + text + "'");
}

Point step(const Point& x, Direction dir) {
  Point y(x);
  y[dir.axis] += dir.sign;
  return y;
}

std::vector<Point> neighbors(const Point& x) {
  const int d = x.dim();
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(2 * d));
  for (int k = 0; k < 2 * d; ++k) out.push_back(step(x, Direction::from_index(k, d)));
  return out;
}

double unit_ball_volume(int d) {
  check_dim(d);
  const double half = 0.5 * d;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

Region::Region(int d) : dim_(d), lo_(d), hi_(d) { check_dim(d); }

Region::Region(int d, std::span<const Point> sites) : Region(d) {
  for (const auto& p : sites) insert(p);
}

Region::Region(int d, std::initializer_list<Point> sites) : Region(d) {
  for (const auto& p : sites) insert(p);
}

bool Region::insert(const Point& x) {
  if (x.dim() != dim_) throw std::invalid_argument("point dimension does not match region");
  const bool was_empty = sites_.empty();
  if (!sites_.insert(x).second) return false;
  if (was_empty) {
    lo_ = hi_ = x;
  } else {
    for (int i = 0; i < dim_; ++i) {
      lo_[i] = std::min(lo_[i], x[i]);
      hi_[i] = std::max(hi_[i], x[i]);
    }
  }
  return true;
}

bool Region::erase(const Point& x) {
  if (sites_.erase(x) == 0) return false;
  bool on_box = false;
  for (int i = 0; i < dim_; ++i) on_box = on_box || x[i] == lo_[i] || x[i] == hi_[i];
  if (on_box) recompute_box();
  return true;
}

void Region::recompute_box() {
  lo_ = hi_ = Point(dim_);
  bool first = true;
  for (const auto& p : sites_) {
    if (first) {
      lo_ = hi_ = p;
      first = false;
      continue;
    }
    for (int i = 0; i < dim_; ++i) {
      lo_[i] = std::min(lo_[i], p[i]);
      hi_[i] = std::max(hi_[i], p[i]);
    }
  }
}

std::vector<Point> Region::sorted() const {
  std::vector<Point> v(sites_.begin(), sites_.end());
  std::sort(v.begin(), v.end());
  return v;
}

Region Region::translated(const Point& v) const {
  Region r(dim_);
  for (const auto& p : sites_) r.insert(p + v);
  return r;
}

Region boundary(const Region& a) {
  Region out(a.dim());
  for (const auto& x : a) {
    for (const auto& y : neighbors(x)) {
      if (!a.contains(y)) out.insert(y);
    }
  }
  return out;
}

bool in_lattice_ball(const Point& y, std::int64_t n) {
  const int d = y.dim();
  const long double s = static_cast<long double>(y.norm2());
  const long double omega = static_cast<long double>(unit_ball_volume(d));
  // omega * s^{d/2} < n
  long double lhs;
  if (d % 2 == 0) {
    lhs = omega * std::pow(s, d / 2);
  } else {
    lhs = omega * std::pow(s, (d - 1) / 2) * std::sqrt(s);
  }
  return lhs < static_cast<long double>(n);
}

Region lattice_ball(std::int64_t n, int d) {
  check_dim(d);
  if (n < 1) throw std::invalid_argument("lattice_ball: n must be >= 1");
  const double rho = std::pow(static_cast<double>(n) / unit_ball_volume(d), 1.0 / d);
  const int r = static_cast<int>(std::floor(rho)) + 1;
  Region out(d);
  Point lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = -r;
    hi[i] = r;
  }
  const BoxIndex box(lo, hi);
  for (std::size_t k = 0; k < box.size(); ++k) {
    const Point y = box.point(k);
    if (in_lattice_ball(y, n)) out.insert(y);
  }
  return out;
}

Region cube(const Point& x, int r) {
  if (r < 0) throw std::invalid_argument("cube: radius must be >= 0");
  const int d = x.dim();
  Point lo(x), hi(x);
  for (int i = 0; i < d; ++i) {
    lo[i] -= r;
    hi[i] += r;
  }
  const BoxIndex box(lo, hi);
  Region out(d);
  for (std::size_t k = 0; k < box.size(); ++k) out.insert(box.point(k));
  return out;
}

bool in_orthant(const Point& x, const Point& base) {
  for (int i = 0; i < x.dim(); ++i) {
    if (x[i] < base[i]) return false;
  }
  return true;
}

BoxIndex::BoxIndex(const Point& lo, const Point& hi) : lo_(lo), hi_(hi) {
  const int d = lo.dim();
  std::int64_t s = 1;
  for (int i = d - 1; i >= 0; --i) {
    if (hi[i] < lo[i]) throw std::invalid_argument("BoxIndex: empty box");
    extent_[i] = static_cast<std::int64_t>(hi[i]) - lo[i] + 1;
    stride_[i] = s;
    s *= extent_[i];
  }
  size_ = static_cast<std::size_t>(s);
}

bool BoxIndex::inside(const Point& x) const {
  for (int i = 0; i < dim(); ++i) {
    if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
  }
  return true;
}

std::size_t BoxIndex::index(const Point& x) const {
  std::int64_t k = 0;
  for (int i = 0; i < dim(); ++i) k += (static_cast<std::int64_t>(x[i]) - lo_[i]) * stride_[i];
  return static_cast<std::size_t>(k);
}

Point BoxIndex::point(std::size_t idx) const {
  Point p(lo_);
  auto rem = static_cast<std::int64_t>(idx);
  for (int i = 0; i < dim(); ++i) {
    p[i] = static_cast<std::int32_t>(lo_[i] + rem / stride_[i]);
    rem %= stride_[i];
  }
  return p;
}

}  // namespace rotorlab
