#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "rotorlab/engine.hpp"
#include "rotorlab/lattice.hpp"

namespace rotorlab {

/// psi(A) = sum over A of |x|^2, exact.
std::int64_t quadratic_weight(const Region& a);

/// Smallest psi over all sets of `count` sites: the sum of the `count`
/// smallest values of |y|^2. A lattice ball attains it when its size is
/// `count`, and it is defined for every cardinality.
std::int64_t min_weight_of_cardinality(std::int64_t count, int d);

/// |A symmetric-difference B_n|.
std::int64_t sym_diff_count(const Region& a, std::int64_t n);

/// Lebesgue measure of n^{-1/d} A^cube symmetric-difference B, where B is the
/// ball of unit volume about the origin and A^cube the union of unit cubes
/// centered at the sites of A. `tol` is the cell volume below which a
/// straddling cell is resolved by its corners.
double lebesgue_error(const Region& a, std::int64_t n, double tol = 1e-6, bool parallel = true);

struct Radii {
  double inradius = 0.0;   // largest r with { |y| < r } inside A
  double outradius = 0.0;  // largest |x| over A
};
/// Throws std::invalid_argument if the origin is not in A.
Radii radii(const Region& a);

/// T_n + 2 sum_x sum_{e = (i, s)} c_{x,e} s x_i - psi(A_n), computed from the
/// odometer and the policy's direction counts. Zero for a correct engine:
/// every step from x along e changes |X|^2 by 2 s x_i + 1.
std::int64_t weight_identity_defect(const AggState& agg);

/// RHS - psi(A_n) for psi(A_n) <= T_n + 8 sqrt(d) D sum_x |x| + 4 d D n.
double verify_weight_inequality(const AggState& agg, double discrepancy);

struct MainPropRecord {
  std::int64_t n = 0;
  std::int64_t psi = 0;
  std::int64_t psi_ball = 0;     // psi(B_n)
  std::int64_t excess = 0;       // psi(A_n) - psi(B_n)
  double normalized = 0.0;       // excess / n^{1+1/d}
  std::int64_t min_weight = 0;   // min psi at cardinality |A_n|
  bool ball_minimizes = true;    // psi(A_n) >= min_weight
  std::optional<double> phi_partial;  // brute-forced Phi(n) when available
};
/// `phi_partial` is passed through when the caller has a brute-force table
/// covering n.
MainPropRecord verify_mainprop(const AggState& agg, std::optional<double> phi_partial = std::nullopt);

struct ShapeReport {
  std::int64_t n = 0;
  std::int64_t psi = 0;
  std::int64_t psi_ball = 0;
  std::int64_t sym_diff = 0;
  double lebesgue_error = 0.0;
  double inradius = 0.0;
  double outradius = 0.0;
  std::uint64_t total_steps = 0;
};
ShapeReport shape_report(const Region& a, std::uint64_t total_steps, double tol = 1e-6);

/// Fitted slope of log y against log x by least squares.
double fit_exponent(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rotorlab
