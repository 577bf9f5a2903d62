#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rotorlab/lattice.hpp"

namespace rotorlab {

/// The lines of A parallel to one axis: for each base point (the axis
/// coordinate zeroed) the sorted axis coordinates of A on that line.
struct ColumnDecomposition {
  int axis = 0;
  std::map<Point, std::vector<std::int32_t>> columns;

  Region reconstruct(int d) const;
};

ColumnDecomposition columns(const Region& a, int axis);

/// Steiner symmetrization about the hyperplane orthogonal to `axis` (0-based):
/// a column of length k becomes { -k/2 < j <= k/2 }.
Region steiner(const Region& a, int axis);

/// Every axis-parallel line meets A in an interval.
bool is_orthoconvex(const Region& a);

/// 4 * xi(A) = sum_x sum_i |4 x_i + 1|, exact.
std::int64_t xi_quarters(const Region& a);
/// xi(A) = sum_x sum_i |x_i + 1/4|.
double xi(const Region& a);

/// 4 * sum_x sum_i |x_i - 1/4|. Each column sum is uniquely minimized by the
/// interval steiner() produces, so this drops by at least 1/2 on every
/// symmetrization step that changes A.
std::int64_t centering_potential_quarters(const Region& a);

/// Applies steiner along every axis until nothing changes. Throws
/// std::logic_error if the potential bound on the number of passes is hit.
Region symmetrize_to_fixpoint(const Region& a);

bool is_connected(const Region& a);

/// Lexicographically least sorted site list over the 2^d d! signed axis
/// permutations, each translated so that its minimum corner is the origin.
std::vector<Point> canonical_key(const Region& a);
Region canonical_form(const Region& a);

/// Connected regions of size n, one per class under translation and the
/// point symmetries, in increasing canonical order. Budget: d = 1 with
/// n <= 50, d = 2 with n <= 10, d = 3 with n <= 6.
std::vector<Region> enumerate_connected(std::int64_t n, int d);
void for_each_connected(std::int64_t n, int d, const std::function<void(const Region&)>& visit);

/// Row strings: for d = 2 rows run from the top (largest second coordinate)
/// down, 'o' occupied, 'b' empty, '$' ends a row, '!' ends the shape, counts
/// prefix runs longer than one. d = 3 joins slices along the third axis
/// with '/'. d = 1 is a single row.
std::string to_rle(const Region& a);
/// Inverse of to_rle; the result's minimum corner is the origin.
Region from_rle(const std::string& text, int d);

}  // namespace rotorlab
