#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rotorlab/engine.hpp"
#include "rotorlab/rotors.hpp"

namespace rotorlab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string message;
  std::vector<std::pair<std::string, double>> metrics;
};

struct VerifyOptions {
  int d = 2;
  std::uint64_t n = 1000;
  std::string policy = "auto";
  /// Forwarded to EngineFault::skip_increment_every for the mutation test.
  std::uint64_t fault_skip = 0;
  double tol = 1e-10;
};

/// Each check is independent; a failing one does not stop the rest.
CheckResult check_discrepancy(const AggState& agg);
CheckResult check_weight_identity(const AggState& agg);
CheckResult check_weight_inequality(const AggState& agg);
CheckResult check_exit_identity(const AggState& agg, double tol);
CheckResult check_abelian(int d, std::uint64_t particles, const RotorPolicy& policy, EngineFault fault);
CheckResult check_ball_weight(std::int64_t n, int d);
CheckResult check_ball_exit(std::int64_t n, int d, double tol);
CheckResult check_interval_deviation(std::uint64_t n_max, EngineFault fault);

std::vector<CheckResult> run_verify_suite(const VerifyOptions& options);

/// Mean e_o(B_n) / (n / omega_d)^{2/d} and psi(B_n) / leading term.
double ball_weight_ratio(std::int64_t n, int d);

/// |hi + lo| of a one-dimensional aggregate (zero for a symmetric interval).
std::int64_t interval_asymmetry(const AggState& agg);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;  // after merging
};
/// Two-sample chi-square test of homogeneity over categorical counts. Bins
/// with an expected count below 5 in either sample are pooled into one.
ChiSquare chi_square_two_sample(const std::map<std::string, std::uint64_t>& a,
                                const std::map<std::string, std::uint64_t>& b);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, int dof);

}  // namespace rotorlab
