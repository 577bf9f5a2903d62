#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotorlab/engine.hpp"
#include "rotorlab/kernels.hpp"
#include "rotorlab/lattice.hpp"

namespace rotorlab {

class SolverDidNotConverge : public std::runtime_error {
 public:
  SolverDidNotConverge(double residual, std::uint64_t sweeps)
      : std::runtime_error("exit-time solve did not converge: residual " + std::to_string(residual) + " after " +
                           std::to_string(sweeps) + " sweeps"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct SolveOptions {
  double tol = 1e-10;
  /// Over-relaxation factor; <= 0 picks the optimal factor for the
  /// bounding box (which over-relaxes slightly for non-box regions).
  double omega = 0.0;
  std::uint64_t max_sweeps = 2'000'000;
  /// Residual is measured every this many sweeps.
  int check_every = 4;
  bool parallel = true;
};

/// Expected exit times e_x(A) of simple random walk: the solution of
/// (1/2d) sum_{y~x} e(y) - e(x) = -1 on A with e = 0 off A.
class ExitField {
 public:
  ExitField() = default;
  ExitField(Region a, kernels::StencilGrid grid, std::vector<double> values, double residual, std::uint64_t sweeps);

  const Region& region() const { return region_; }
  int dim() const { return region_.dim(); }
  /// Zero for x outside A.
  double at(const Point& x) const;
  double residual() const { return residual_; }
  std::uint64_t sweeps() const { return sweeps_; }

  /// Sum of e_x over x in A.
  double sum() const;

  const kernels::StencilGrid& grid() const { return grid_; }
  const std::vector<double>& raw() const { return values_; }

 private:
  Region region_;
  kernels::StencilGrid grid_;
  std::vector<double> values_;
  double residual_ = 0.0;
  std::uint64_t sweeps_ = 0;
};

ExitField solve_exit(const Region& a, const SolveOptions& options = {});
inline ExitField solve_exit(const Region& a, double tol) {
  SolveOptions o;
  o.tol = tol;
  return solve_exit(a, o);
}

/// ebar(A) = max over x of e_x(A).
double max_exit(const ExitField& field);

/// Leading term (n / omega_d)^{2/d} of e_o(B_n).
double ball_exit_asymptotic(std::int64_t n, int d);

/// Sum over unordered adjacent pairs in A u dA of |e_x - e_y|.
double gradient_sum(const ExitField& field);

/// Error-exponent constants gamma_1 = 1, gamma_2 = 1/3,
/// gamma_d = 2^{-d} / (2 d^2 log 3) for d >= 3. Used to label reports.
double isoperimetric_gamma(int d);

struct IsoReport {
  std::int64_t n = 0;
  int d = 0;
  std::size_t shapes = 0;
  double max_e = 0.0;
  Region argmax{2};
  double e_ball = 0.0;  // e_o(B_n), exact solve
  double phi_hat = 0.0;
  std::string note;
};

/// Brute-force phi(n): solves every connected region of size n (up to lattice
/// symmetry) and reports the largest ebar against e_o(B_n). Budget: d = 1 with
/// n <= 50, d = 2 with n <= 10, d = 3 with n <= 6.
IsoReport brute_force_phi(std::int64_t n, int d, double tol = 1e-10);

/// phi_hat(1..n_max) and the partial sums Phi_hat(1..n_max).
struct PhiTable {
  std::vector<IsoReport> rows;
  std::vector<double> partial_sums;
};
PhiTable phi_table(std::int64_t n_max, int d, double tol = 1e-10);

/// The exit-weight bookkeeping of a rotor aggregate: T_n against
/// n e_o(A_n) - sum_x e_x(A_n).
struct ExitIdentity {
  double defect = 0.0;          // | T_n - (n e_o - sum e) |
  double discrepancy = 0.0;     // audited D of the realized run
  double normalized = 0.0;      // defect / (D n^{1+1/d})
  double bound = 0.0;           // 2 D * gradient_sum, the worst case for defect
};

ExitIdentity verify_exit_identity(const AggState& agg, const ExitField& field);

}  // namespace rotorlab
