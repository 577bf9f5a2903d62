// rotorlab command-line driver.
//
//   rotorlab aggregate -d 2 -n 3 --policy nesw
//   rotorlab verify -d 2 -n 1000
//   rotorlab exit --ball -d 2 -n 10000
//
// Every command reads an optional key = value config (--config) and then
// applies the flags given on the command line on top of it.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rotorlab/config.hpp"
#include "rotorlab/engine.hpp"
#include "rotorlab/exittime.hpp"
#include "rotorlab/kernels.hpp"
#include "rotorlab/montecarlo.hpp"
#include "rotorlab/report.hpp"
#include "rotorlab/shape.hpp"
#include "rotorlab/snapshot.hpp"
#include "rotorlab/symmetry.hpp"
#include "rotorlab/verify.hpp"

using namespace rotorlab;

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flags are collected as text and replayed through RunConfig::set, so the
// command line and config files share one parser.
struct Overrides {
  std::string config_path;
  std::vector<std::pair<CLI::Option*, std::string>> opts;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;

  void add(CLI::App* app, const std::string& names, const std::string& key, const std::string& help) {
    opts.emplace_back(app->add_option(names, values[key], help), key);
  }
  void flag(CLI::App* app, const std::string& names, const std::string& key, const std::string& help) {
    opts.emplace_back(app->add_flag(names, flags[key], help), key);
  }

  RunConfig resolve(const std::string& command) const {
    RunConfig c = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    c.command = command;
    for (const auto& [opt, key] : opts) {
      if (opt->count() == 0) continue;
      auto f = flags.find(key);
      c.set(key, f != flags.end() ? (f->second ? "true" : "false") : values.at(key));
    }
    c.validate();
    return c;
  }
};

std::string site_list(const std::vector<Point>& sites) {
  std::string s = "{";
  for (std::size_t i = 0; i < sites.size(); ++i) s += (i ? ", " : "") + sites[i].str();
  return s + "}";
}

RotorPolicy policy_of(const RunConfig& c) {
  try {
    return RotorPolicy::parse(c.resolved_policy(), c.d);
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid policy: ") + e.what());
  }
}

// aggregate and shape-curve ------------------------------------------------

int run_aggregate(const RunConfig& c, bool curve) {
  const RotorPolicy policy = policy_of(c);
  std::unique_ptr<AggState> s;
  if (!c.resume.empty()) {
    s = std::make_unique<AggState>(read_snapshot(c.resume));
    if (s->policy().descriptor() != policy.descriptor()) {
      throw UsageError("snapshot policy '" + s->policy().descriptor() + "' differs from '" + policy.descriptor() + "'");
    }
    if (s->particles() > c.n) throw UsageError("snapshot already holds more than n particles");
  } else {
    s = std::make_unique<AggState>(policy, EngineFault{c.fault_skip});
  }

  std::string csv = c.csv;
  if (curve && csv.empty()) csv = "-";
  std::unique_ptr<CsvWriter> out;
  if (!csv.empty()) {
    if (!c.resume.empty() && csv != "-") {
      out = std::make_unique<CsvWriter>(
          CsvWriter::resume(csv, kShapeCurveSchema, shape_curve_header(), s->particles()));
    } else {
      out = std::make_unique<CsvWriter>(csv, kShapeCurveSchema, shape_curve_header());
    }
  }

  auto advance = [&](std::uint64_t target) {
    while (s->particles() < target) {
      std::uint64_t next = target;
      if (c.snapshot_every > 0 && !c.snapshot.empty()) {
        const std::uint64_t mark = (s->particles() / c.snapshot_every + 1) * c.snapshot_every;
        next = std::min(next, mark);
      }
      s->run_to(next);
      if (c.snapshot_every > 0 && !c.snapshot.empty() && next % c.snapshot_every == 0) write_snapshot(*s, c.snapshot);
    }
  };

  for (const auto checkpoint : c.checkpoint_list()) {
    if (checkpoint <= s->particles()) continue;
    advance(checkpoint);
    if (out) {
      out->row(shape_curve_row(shape_report(s->region(), s->total_steps(), c.lebesgue_tol)));
      out->flush();
    }
  }
  s->check_invariants();
  if (!c.snapshot.empty()) write_snapshot(*s, c.snapshot);
  if (!c.render.empty()) render_aggregate(c.render, s->sites());

  if (!curve || csv != "-") {
    const auto n = s->particles();
    if (n <= 64) {
      std::cout << "A_" << n << " = " << site_list(s->sites()) << "\n";
      std::cout << "T_" << n << " = " << s->total_steps() << "\n";
    } else {
      const Radii r = radii(s->region());
      std::cout << "n = " << n << "\nT_n = " << s->total_steps() << "\ninradius = " << r.inradius
                << "\noutradius = " << r.outradius << "\n";
    }
    std::cout << "policy = " << s->policy().descriptor() << "\n";
  }
  return 0;
}

int run_idla(const RunConfig& c) {
  const IdlaResult r = idla(c.n, c.d, c.seed);
  const ShapeReport rep = shape_report(r.region, r.total_steps, c.lebesgue_tol);
  if (!c.csv.empty()) {
    CsvWriter out(c.csv, kShapeCurveSchema, shape_curve_header());
    out.row(shape_curve_row(rep));
  }
  if (!c.render.empty()) render_aggregate(c.render, r.sites);
  if (c.n <= 64) std::cout << "A_" << c.n << " = " << site_list(r.sites) << "\n";
  std::cout << "n = " << c.n << "\nseed = " << c.seed << "\ntotal_steps = " << r.total_steps
            << "\nsym_diff = " << rep.sym_diff << "\nlebesgue_error = " << fmt_real(rep.lebesgue_error)
            << "\ninradius = " << rep.inradius << "\noutradius = " << rep.outradius << "\n";
  return 0;
}

int run_verify(const RunConfig& c) {
  VerifyOptions o;
  o.d = c.d;
  o.n = c.n;
  o.policy = c.resolved_policy();
  o.fault_skip = c.fault_skip;
  o.tol = c.tol;
  (void)policy_of(c);
  const auto results = run_verify_suite(o);
  std::vector<std::string> failed;
  for (const auto& r : results) {
    nlohmann::ordered_json j;
    j["check"] = r.name;
    j["pass"] = r.pass;
    j["message"] = r.message;
    for (const auto& [k, v] : r.metrics) j[k] = v;
    std::cout << j.dump() << "\n";
    if (!r.pass) failed.push_back(r.name);
  }
  nlohmann::ordered_json summary;
  summary["summary"] = failed.empty() ? "pass" : "fail";
  summary["failed"] = failed;
  std::cout << summary.dump() << std::endl;
  if (!failed.empty()) {
    std::string names;
    for (const auto& f : failed) names += (names.empty() ? "" : ", ") + f;
    std::cerr << "verify failed: " << names << "\n";
    return kExitVerifyFailed;
  }
  return 0;
}

int run_exit(const RunConfig& c) {
  Region a(c.d);
  if (c.ball) {
    a = lattice_ball(static_cast<std::int64_t>(c.n), c.d);
  } else if (!c.region.empty()) {
    a = from_rle(c.region, c.d);
  } else {
    throw UsageError("exit needs --ball or --region");
  }
  const ExitField f = solve_exit(a, c.tol);
  const Point o = Point::origin(c.d);
  const double e_o = f.at(o);
  std::cout << "sites = " << a.size() << "\nsweeps = " << f.sweeps() << "\nresidual = " << f.residual()
            << "\nmax_e = " << fmt_real(max_exit(f)) << "\n";
  if (a.contains(o)) std::cout << "e_o = " << fmt_real(e_o) << "\n";
  double lead = 0.0, ratio = 0.0;
  if (c.ball) {
    lead = ball_exit_asymptotic(static_cast<std::int64_t>(c.n), c.d);
    ratio = e_o / lead;
    std::cout << "(n/omega_d)^(2/d) = " << fmt_real(lead) << "\nratio = " << fmt_real(ratio)
              << "\n|e_o - lead| / n^(1/d) = "
              << fmt_real(std::abs(e_o - lead) / std::pow(static_cast<double>(c.n), 1.0 / c.d)) << "\n";
  }
  if (!c.csv.empty()) {
    CsvWriter out(c.csv, kExitSchema, {"n", "d", "e_o", "max_e", "leading", "ratio", "sweeps", "residual"});
    out.row({std::to_string(a.size()), std::to_string(c.d), fmt_real(e_o), fmt_real(max_exit(f)), fmt_real(lead),
             fmt_real(ratio), std::to_string(f.sweeps()), fmt_real(f.residual())});
  }
  return 0;
}

int run_bruteforce(const RunConfig& c) {
  PhiTable t;
  try {
    t = phi_table(static_cast<std::int64_t>(c.n), c.d, c.tol);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::unique_ptr<CsvWriter> out;
  if (!c.csv.empty()) out = std::make_unique<CsvWriter>(c.csv, kIsoSchema, iso_header());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    std::cout << "n = " << r.n << ": " << r.shapes << " shapes solved, max ebar = " << fmt_real(r.max_e)
              << ", e_o(B_n) = " << fmt_real(r.e_ball) << ", phi_hat = " << fmt_real(r.phi_hat)
              << ", Phi_hat = " << fmt_real(t.partial_sums[i]) << ", argmax = " << to_rle(r.argmax) << "\n";
    if (out) out->row(iso_row(r));
  }
  std::cout << "note: " << t.rows.back().note << "\n";
  return 0;
}

int run_orthant(const RunConfig& c) {
  const auto params = [&](int k) {
    std::ostringstream os;
    os << "d=" << c.d << " k=" << k << " r=" << c.r;
    return os.str();
  };
  OrthantEstimate p;
  try {
    p = estimate_orthant_survival(c.k, c.r, c.d, c.trials, c.seed, c.exhaustive);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::unique_ptr<CsvWriter> out;
  if (!c.csv.empty()) out = std::make_unique<CsvWriter>(c.csv, kMonteCarloSchema, montecarlo_header());
  std::cout << "p(" << c.k << "," << c.r << ") = " << fmt_real(p.best.mean) << " +- " << fmt_real(p.best.stderr_)
            << " (start " << p.argmax.str() << ", " << p.best.trials << " trials per start)\n";
  if (out) out->row(montecarlo_row("orthant", params(c.k), p.best));
  if (c.r >= 9 * c.k) {
    const OrthantEstimate q = estimate_orthant_survival(3 * c.k, c.r, c.d, c.trials, c.seed + 1, false);
    const double factor = 1.0 - std::pow(2.0, -c.d) / (2.0 * c.d);
    const double sigma = std::hypot(p.best.stderr_, factor * q.best.stderr_);
    const double rhs = factor * q.best.mean + 3.0 * sigma;
    std::cout << "p(" << 3 * c.k << "," << c.r << ") = " << fmt_real(q.best.mean) << " +- " << fmt_real(q.best.stderr_)
              << "\ninequality: p(" << c.k << "," << c.r << ") = " << fmt_real(p.best.mean) << " <= "
              << fmt_real(factor) << " * p(" << 3 * c.k << "," << c.r << ") + 3 sigma = " << fmt_real(rhs) << " : "
              << (p.best.mean <= rhs ? "holds" : "VIOLATED") << "\n";
    if (out) out->row(montecarlo_row("orthant", params(3 * c.k), q.best));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  kernels::apply_thread_cap();
  CLI::App app{"rotorlab: rotor-router aggregation, internal DLA and exit-time experiments"};
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    Overrides o;
  };
  std::map<std::string, Command> cmds;
  auto make = [&](const std::string& name, const std::string& help) -> Overrides& {
    auto& c = cmds[name];
    c.app = app.add_subcommand(name, help);
    c.app->add_option("--config", c.o.config_path, "key = value config file; flags override it");
    c.o.add(c.app, "-d,--dim", "d", "lattice dimension (1..4)");
    return c.o;
  };

  {
    for (const std::string name : {"aggregate", "shape-curve"}) {
      auto& o = make(name, name == "aggregate" ? "grow a rotor-router aggregate"
                                               : "rotor-router aggregate shape functionals at checkpoints (CSV)");
      o.add(cmds[name].app, "-n", "n", "number of particles");
      o.add(cmds[name].app, "--policy", "policy", "rotor policy descriptor (nesw, default, cyclic ..., explicit ..., scripted ...)");
      o.add(cmds[name].app, "--checkpoints", "checkpoints", "comma-separated particle counts, or 'log'");
      o.add(cmds[name].app, "--csv", "csv", "shape-curve CSV path ('-' for stdout)");
      o.add(cmds[name].app, "--render", "render", "PGM render path (d = 2)");
      o.add(cmds[name].app, "--snapshot", "snapshot", "snapshot path written at the end (and every --snapshot-every)");
      o.add(cmds[name].app, "--snapshot-every", "snapshot_every", "particles between snapshots");
      o.add(cmds[name].app, "--resume", "resume", "snapshot to continue from");
      o.add(cmds[name].app, "--lebesgue-tol", "lebesgue_tol", "cell volume for the cube/ball integrator");
    }
  }
  {
    auto& o = make("idla", "grow an internal DLA cluster");
    o.add(cmds["idla"].app, "-n", "n", "number of particles");
    o.add(cmds["idla"].app, "--seed", "seed", "64-bit seed");
    o.add(cmds["idla"].app, "--csv", "csv", "shape row CSV path");
    o.add(cmds["idla"].app, "--render", "render", "PGM render path (d = 2)");
    o.add(cmds["idla"].app, "--lebesgue-tol", "lebesgue_tol", "cell volume for the cube/ball integrator");
  }
  {
    auto& o = make("verify", "run the identity suite and print JSON lines");
    o.add(cmds["verify"].app, "-n", "n", "number of particles");
    o.add(cmds["verify"].app, "--policy", "policy", "rotor policy descriptor");
    o.add(cmds["verify"].app, "--tol", "tol", "exit solver tolerance");
    o.add(cmds["verify"].app, "--fault-skip", "fault_skip", "mutation test: skip the rotor advance every k-th step");
  }
  {
    auto& o = make("exit", "solve expected exit times");
    o.add(cmds["exit"].app, "-n", "n", "ball size for --ball");
    o.flag(cmds["exit"].app, "--ball", "ball", "solve on the lattice ball B_n");
    o.add(cmds["exit"].app, "--region", "region", "row-string shape to solve on");
    o.add(cmds["exit"].app, "--tol", "tol", "max residual");
    o.add(cmds["exit"].app, "--csv", "csv", "CSV path");
  }
  {
    auto& o = make("bruteforce-iso", "exact max exit time over all connected regions of size <= n");
    o.add(cmds["bruteforce-iso"].app, "-n", "n", "largest region size");
    o.add(cmds["bruteforce-iso"].app, "--tol", "tol", "exit solver tolerance");
    o.add(cmds["bruteforce-iso"].app, "--csv", "csv", "CSV path");
  }
  {
    auto& o = make("orthant", "Monte Carlo orthant-avoidance probabilities p(k, r)");
    o.add(cmds["orthant"].app, "-k", "k", "start cube radius");
    o.add(cmds["orthant"].app, "-r", "r", "escape cube radius");
    o.add(cmds["orthant"].app, "--trials", "trials", "walks per start");
    o.add(cmds["orthant"].app, "--seed", "seed", "64-bit seed");
    o.flag(cmds["orthant"].app, "--exhaustive", "exhaustive", "use every start in the radius-k cube (k <= 2)");
    o.add(cmds["orthant"].app, "--csv", "csv", "CSV path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    for (auto& [name, cmd] : cmds) {
      if (!cmd.app->parsed()) continue;
      const RunConfig c = cmd.o.resolve(name);
      if (name == "aggregate") return run_aggregate(c, false);
      if (name == "shape-curve") return run_aggregate(c, true);
      if (name == "idla") return run_idla(c);
      if (name == "verify") return run_verify(c);
      if (name == "exit") return run_exit(c);
      if (name == "bruteforce-iso") return run_bruteforce(c);
      if (name == "orthant") return run_orthant(c);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
