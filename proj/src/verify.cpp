#include "rotorlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "rotorlab/exittime.hpp"
#include "rotorlab/shape.hpp"

namespace rotorlab {

namespace {

CheckResult make(std::string name, bool pass, std::string message) {
  CheckResult r;
  r.name = std::move(name);
  r.pass = pass;
  r.message = std::move(message);
  return r;
}

}  // namespace

CheckResult check_discrepancy(const AggState& agg) {
  const double dd = realized_discrepancy(agg.policy(), agg.odometer_entries());
  const bool cyclic = agg.policy().is_cyclic();
  // Only cyclic stacks promise D <= 1; other policies just report it.
  CheckResult r = make("discrepancy", !cyclic || dd <= 1.0,
                       cyclic ? "audited D of the realized run is at most 1" : "audited D reported");
  r.metrics = {{"D", dd}, {"n", static_cast<double>(agg.particles())}};
  return r;
}

CheckResult check_weight_identity(const AggState& agg) {
  const std::int64_t defect = weight_identity_defect(agg);
  CheckResult r = make("weight-identity", defect == 0,
                       "psi(A_n) equals T_n plus twice the net rotor drift, exactly");
  r.metrics = {{"defect", static_cast<double>(defect)}};
  return r;
}

CheckResult check_weight_inequality(const AggState& agg) {
  const double dd = realized_discrepancy(agg.policy(), agg.odometer_entries());
  const double slack = verify_weight_inequality(agg, dd);
  CheckResult r = make("weight-inequality", slack >= 0.0, "psi(A_n) <= T_n + 8 sqrt(d) D sum|x| + 4 d D n");
  r.metrics = {{"slack", slack}, {"D", dd}, {"psi", static_cast<double>(quadratic_weight(agg.region()))},
               {"T_n", static_cast<double>(agg.total_steps())}};
  return r;
}

CheckResult check_exit_identity(const AggState& agg, double tol) {
  const ExitField field = solve_exit(agg.region(), tol);
  const ExitIdentity id = verify_exit_identity(agg, field);
  const double n = static_cast<double>(agg.particles());
  const double e_o = field.at(Point::origin(agg.dim()));
  // The solve satisfies the Laplacian equation to `tol` per site, which
  // shifts the telescoped sum by at most T_n * tol.
  const double allowance = static_cast<double>(agg.total_steps()) * field.residual() + 1e-9 * n * e_o;
  CheckResult r = make("exit-identity", id.defect <= id.bound + allowance,
                       "|T_n - (n e_o - sum e)| <= 2 D * gradient sum (plus solver tolerance)");
  r.metrics = {{"defect", id.defect},       {"bound", id.bound},           {"normalized", id.normalized},
               {"D", id.discrepancy},       {"residual", field.residual()}};
  return r;
}

CheckResult check_abelian(int d, std::uint64_t particles, const RotorPolicy& policy, EngineFault fault) {
  const std::vector<Point> initial(particles, Point::origin(d));
  std::vector<std::pair<std::string, Schedule>> schedules = {{"fixed-order", Schedule::fixed_order()},
                                                             {"highest-label", Schedule::highest_label()}};
  for (std::uint64_t s = 1; s <= 5; ++s) schedules.emplace_back("random-site:" + std::to_string(s), Schedule::random_site(s));
  const RelaxResult ref = df_relax(initial, schedules.front().second, Mover::rotor(policy), fault);
  std::string mismatch;
  for (std::size_t i = 1; i < schedules.size() && mismatch.empty(); ++i) {
    const RelaxResult other = df_relax(initial, schedules[i].second, Mover::rotor(policy), fault);
    if (!(other.final_sites == ref.final_sites) || other.steps != ref.steps || other.odometer != ref.odometer) {
      mismatch = schedules[i].first;
    }
  }
  CheckResult r = make("abelian", mismatch.empty(),
                       mismatch.empty() ? "final set, step count and odometer agree across all schedules"
                                        : "schedule " + mismatch + " disagrees with fixed-order");
  r.metrics = {{"particles", static_cast<double>(particles)},
               {"steps", static_cast<double>(ref.steps)},
               {"schedules", static_cast<double>(schedules.size())}};
  return r;
}

double ball_weight_ratio(std::int64_t n, int d) {
  const double psi = static_cast<double>(quadratic_weight(lattice_ball(n, d)));
  const double lead = d / (d + 2.0) * std::pow(unit_ball_volume(d), -2.0 / d) * std::pow(static_cast<double>(n), 1.0 + 2.0 / d);
  return psi / lead;
}

CheckResult check_ball_weight(std::int64_t n, int d) {
  const double ratio = ball_weight_ratio(n, d);
  CheckResult r = make("ball-weight", ratio >= 0.95 && ratio <= 1.05, "psi(B_n) over its leading term lies in [0.95, 1.05]");
  r.metrics = {{"n", static_cast<double>(n)}, {"d", static_cast<double>(d)}, {"ratio", ratio}};
  return r;
}

CheckResult check_ball_exit(std::int64_t n, int d, double tol) {
  const double e_o = solve_exit(lattice_ball(n, d), tol).at(Point::origin(d));
  const double lead = ball_exit_asymptotic(n, d);
  const double ratio = e_o / lead;
  CheckResult r = make("ball-exit", ratio >= 0.95 && ratio <= 1.05, "e_o(B_n) over (n / omega_d)^{2/d} lies in [0.95, 1.05]");
  r.metrics = {{"n", static_cast<double>(n)}, {"d", static_cast<double>(d)}, {"e_o", e_o}, {"ratio", ratio},
               {"C", std::abs(e_o - lead) / std::pow(static_cast<double>(n), 1.0 / d)}};
  return r;
}

std::int64_t interval_asymmetry(const AggState& agg) {
  std::int64_t lo = 0, hi = 0;
  for (const auto& x : agg.sites()) {
    lo = std::min<std::int64_t>(lo, x[0]);
    hi = std::max<std::int64_t>(hi, x[0]);
  }
  return std::llabs(hi + lo);
}

CheckResult check_interval_deviation(std::uint64_t n_max, EngineFault fault) {
  AggState s(RotorPolicy::default_cyclic(1), fault);
  std::int64_t worst = 0;
  bool interval = true;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    s.run_to(n);
    if (n < 10) continue;
    worst = std::max(worst, interval_asymmetry(s));
    const Region a = s.region();
    interval = interval && static_cast<std::int64_t>(a.size()) == a.hi()[0] - a.lo()[0] + 1;
  }
  CheckResult r = make("interval", interval && worst <= 2,
                       "d = 1 aggregates stay intervals within distance 2 of symmetric for n in 10.." + std::to_string(n_max));
  r.metrics = {{"max_asymmetry", static_cast<double>(worst)}, {"n_max", static_cast<double>(n_max)}};
  return r;
}

std::vector<CheckResult> run_verify_suite(const VerifyOptions& o) {
  std::string desc = o.policy;
  if (desc == "auto") desc = o.d == 2 ? "nesw" : "default";
  const RotorPolicy policy = RotorPolicy::parse(desc, o.d);
  const EngineFault fault{o.fault_skip};
  AggState agg(policy, fault);
  agg.run_to(o.n);

  std::vector<CheckResult> out;
  out.push_back(check_discrepancy(agg));
  out.push_back(check_weight_identity(agg));
  out.push_back(check_weight_inequality(agg));
  out.push_back(check_exit_identity(agg, o.tol));
  out.push_back(check_abelian(o.d, std::min<std::uint64_t>(o.n, 200), policy, fault));
  const int dball = (o.d == 2 || o.d == 3) ? o.d : 2;
  out.push_back(check_ball_weight(100000, dball));
  out.push_back(check_ball_exit(10000, 2, o.tol));
  out.push_back(check_interval_deviation(1000, fault));
  return out;
}

double chi_square_sf(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquare chi_square_two_sample(const std::map<std::string, std::uint64_t>& a,
                                const std::map<std::string, std::uint64_t>& b) {
  double na = 0, nb = 0;
  for (const auto& [k, v] : a) na += static_cast<double>(v);
  for (const auto& [k, v] : b) nb += static_cast<double>(v);
  const double total = na + nb;
  ChiSquare out;
  if (na == 0 || nb == 0) return out;

  std::map<std::string, std::pair<double, double>> cells;
  for (const auto& [k, v] : a) cells[k].first += static_cast<double>(v);
  for (const auto& [k, v] : b) cells[k].second += static_cast<double>(v);

  std::vector<std::pair<double, double>> bins;
  std::pair<double, double> pooled{0, 0};
  for (const auto& [k, c] : cells) {
    const double row = c.first + c.second;
    if (row * na / total < 5.0 || row * nb / total < 5.0) {
      pooled.first += c.first;
      pooled.second += c.second;
    } else {
      bins.push_back(c);
    }
  }
  if (pooled.first + pooled.second > 0) bins.push_back(pooled);
  out.bins = bins.size();
  for (const auto& [oa, ob] : bins) {
    const double row = oa + ob;
    const double ea = row * na / total, eb = row * nb / total;
    out.statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
  }
  out.dof = static_cast<int>(bins.size()) - 1;
  out.p_value = chi_square_sf(out.statistic, out.dof);
  return out;
}

}  // namespace rotorlab
