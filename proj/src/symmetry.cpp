#include "rotorlab/symmetry.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

namespace rotorlab {

namespace {

std::int64_t enumeration_budget(int d) {
  switch (d) {
    case 1: return 50;
    case 2: return 10;
    case 3: return 6;
    default: return 0;
  }
}

std::vector<Point> normalized(std::vector<Point> pts) {
  const int d = pts.front().dim();
  Point lo = pts.front();
  for (const auto& p : pts) {
    for (int i = 0; i < d; ++i) lo[i] = std::min(lo[i], p[i]);
  }
  for (auto& p : pts) p = p - lo;
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

Region ColumnDecomposition::reconstruct(int d) const {
  Region out(d);
  for (const auto& [base, offsets] : columns) {
    for (const auto j : offsets) {
      Point p = base;
      p[axis] = j;
      out.insert(p);
    }
  }
  return out;
}

ColumnDecomposition columns(const Region& a, int axis) {
  if (axis < 0 || axis >= a.dim()) throw std::invalid_argument("columns: axis out of range");
  ColumnDecomposition cd;
  cd.axis = axis;
  for (const auto& x : a) {
    Point base = x;
    base[axis] = 0;
    cd.columns[base].push_back(x[axis]);
  }
  for (auto& [base, offsets] : cd.columns) std::sort(offsets.begin(), offsets.end());
  return cd;
}

Region steiner(const Region& a, int axis) {
  const ColumnDecomposition cd = columns(a, axis);
  Region out(a.dim());
  for (const auto& [base, offsets] : cd.columns) {
    const auto len = static_cast<std::int32_t>(offsets.size());
    // -len/2 < j <= len/2
    const std::int32_t top = len / 2;
    for (std::int32_t j = top - len + 1; j <= top; ++j) {
      Point p = base;
      p[axis] = j;
      out.insert(p);
    }
  }
  return out;
}

bool is_orthoconvex(const Region& a) {
  for (int axis = 0; axis < a.dim(); ++axis) {
    for (const auto& [base, offsets] : columns(a, axis).columns) {
      if (offsets.back() - offsets.front() + 1 != static_cast<std::int32_t>(offsets.size())) return false;
    }
  }
  return true;
}

std::int64_t xi_quarters(const Region& a) {
  std::int64_t q = 0;
  for (const auto& x : a) {
    for (int i = 0; i < a.dim(); ++i) q += std::llabs(4LL * x[i] + 1);
  }
  return q;
}

double xi(const Region& a) { return static_cast<double>(xi_quarters(a)) / 4.0; }

std::int64_t centering_potential_quarters(const Region& a) {
  std::int64_t q = 0;
  for (const auto& x : a) {
    for (int i = 0; i < a.dim(); ++i) q += std::llabs(4LL * x[i] - 1);
  }
  return q;
}

Region symmetrize_to_fixpoint(const Region& a) {
  // Each changing step lowers the potential by at least 2 quarters and the
  // potential is at least |A| d quarters.
  const std::int64_t max_changes = centering_potential_quarters(a) / 2 + 1;
  Region cur = a;
  std::int64_t changes = 0;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int axis = 0; axis < a.dim(); ++axis) {
      Region next = steiner(cur, axis);
      if (next == cur) continue;
      cur = std::move(next);
      moved = true;
      if (++changes > max_changes) throw std::logic_error("symmetrize_to_fixpoint exceeded its iteration bound");
    }
  }
  return cur;
}

bool is_connected(const Region& a) {
  if (a.empty()) return true;
  Region seen(a.dim());
  std::deque<Point> queue{*a.begin()};
  seen.insert(*a.begin());
  while (!queue.empty()) {
    const Point x = queue.front();
    queue.pop_front();
    for (const auto& y : neighbors(x)) {
      if (a.contains(y) && seen.insert(y)) queue.push_back(y);
    }
  }
  return seen.size() == a.size();
}

std::vector<Point> canonical_key(const Region& a) {
  if (a.empty()) return {};
  const int d = a.dim();
  const std::vector<Point> pts(a.begin(), a.end());
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Point> best;
  do {
    for (int signs = 0; signs < (1 << d); ++signs) {
      std::vector<Point> img;
      img.reserve(pts.size());
      for (const auto& p : pts) {
        Point q(d);
        for (int i = 0; i < d; ++i) {
          const std::int32_t v = p[perm[static_cast<std::size_t>(i)]];
          q[i] = (signs >> i) & 1 ? -v : v;
        }
        img.push_back(q);
      }
      img = normalized(std::move(img));
      if (best.empty() || img < best) best = std::move(img);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Region canonical_form(const Region& a) {
  const auto key = canonical_key(a);
  return Region(a.dim(), key);
}

std::vector<Region> enumerate_connected(std::int64_t n, int d) {
  if (n < 1) throw std::invalid_argument("enumerate_connected: n must be >= 1");
  if (n > enumeration_budget(d)) {
    throw std::invalid_argument("enumerate_connected: n = " + std::to_string(n) +
                                " exceeds the enumeration budget for d = " + std::to_string(d));
  }
  std::set<std::vector<Point>> level{{Point::origin(d)}};
  for (std::int64_t size = 2; size <= n; ++size) {
    std::set<std::vector<Point>> next;
    for (const auto& key : level) {
      const Region r(d, key);
      for (const auto& y : boundary(r)) {
        Region grown = r;
        grown.insert(y);
        next.insert(canonical_key(grown));
      }
    }
    level = std::move(next);
  }
  std::vector<Region> out;
  out.reserve(level.size());
  for (const auto& key : level) out.emplace_back(d, key);
  return out;
}

void for_each_connected(std::int64_t n, int d, const std::function<void(const Region&)>& visit) {
  for (const auto& r : enumerate_connected(n, d)) visit(r);
}

namespace {

void append_run(std::string& out, int count, char c) {
  if (count <= 0) return;
  if (count > 1) out += std::to_string(count);
  out += c;
}

// One row along axis 0 at fixed higher coordinates.
std::string encode_row(const Region& a, Point base, std::int32_t x_lo, std::int32_t x_hi) {
  std::string row;
  char cur = 0;
  int run = 0;
  int pending_blank = 0;
  for (std::int32_t x = x_lo; x <= x_hi; ++x) {
    base[0] = x;
    const char c = a.contains(base) ? 'o' : 'b';
    if (c == cur) {
      ++run;
      continue;
    }
    if (cur == 'o') append_run(row, run, 'o');
    if (cur == 'b') pending_blank = run;
    if (c == 'o' && pending_blank) {
      append_run(row, pending_blank, 'b');
      pending_blank = 0;
    }
    cur = c;
    run = 1;
  }
  if (cur == 'o') append_run(row, run, 'o');
  return row;
}

}  // namespace

std::string to_rle(const Region& a) {
  const int d = a.dim();
  if (d > 3) throw std::invalid_argument("to_rle supports d <= 3");
  if (a.empty()) return "!";
  const Point lo = a.lo(), hi = a.hi();
  std::string out;
  auto encode_slice = [&](std::int32_t z) {
    if (d == 1) {
      out += encode_row(a, Point(1), lo[0], hi[0]);
      return;
    }
    for (std::int32_t y = hi[1]; y >= lo[1]; --y) {
      Point base(d);
      base[1] = y;
      if (d == 3) base[2] = z;
      out += encode_row(a, base, lo[0], hi[0]);
      if (y != lo[1]) out += '$';
    }
  };
  if (d == 3) {
    for (std::int32_t z = lo[2]; z <= hi[2]; ++z) {
      encode_slice(z);
      if (z != hi[2]) out += '/';
    }
  } else {
    encode_slice(0);
  }
  out += '!';
  return out;
}

Region from_rle(const std::string& text, int d) {
  if (d < 1 || d > 3) throw std::invalid_argument("from_rle supports d <= 3");
  // Collect (row, column, slice) triples, then flip rows so the top row
  // has the largest second coordinate.
  struct Cell {
    std::int32_t x, row, z;
  };
  std::vector<Cell> cells;
  std::int32_t x = 0, row = 0, z = 0;
  std::int32_t count = 0;
  std::int32_t rows_in_slice = 0;
  std::vector<std::int32_t> slice_rows;
  bool done = false;
  for (const char c : text) {
    if (done) throw std::invalid_argument("from_rle: data after '!'");
    if (c >= '0' && c <= '9') {
      count = count * 10 + (c - '0');
      continue;
    }
    const std::int32_t k = count ? count : 1;
    count = 0;
    switch (c) {
      case 'o':
        for (std::int32_t i = 0; i < k; ++i) cells.push_back({x++, row, z});
        break;
      case 'b': x += k; break;
      case '$':
        if (d == 1) throw std::invalid_argument("from_rle: row separator in a 1-d shape");
        row += k;
        x = 0;
        break;
      case '/':
        if (d != 3) throw std::invalid_argument("from_rle: slice separator needs d = 3");
        slice_rows.push_back(row + 1);
        ++z;
        row = 0;
        x = 0;
        break;
      case '!': done = true; break;
      default: throw std::invalid_argument(std::string("from_rle: unexpected character '") + c + "'");
    }
  }
  if (!done) throw std::invalid_argument("from_rle: missing '!'");
  rows_in_slice = row + 1;
  slice_rows.push_back(rows_in_slice);
  std::int32_t max_rows = *std::max_element(slice_rows.begin(), slice_rows.end());
  Region out(d);
  for (const auto& c : cells) {
    Point p(d);
    p[0] = c.x;
    if (d >= 2) p[1] = max_rows - 1 - c.row;
    if (d == 3) p[2] = c.z;
    out.insert(p);
  }
  if (out.empty()) return out;
  Point lo = out.lo();
  return out.translated(Point(d) - lo);
}

}  // namespace rotorlab
