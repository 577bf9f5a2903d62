#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rotorlab/lattice.hpp"
#include "rotorlab/rotors.hpp"

namespace rotorlab {

struct WalkResult {
  Point exit;
  std::uint64_t steps = 0;
};

/// Rotor-router walk from `start` until the first site outside `a`.
/// Mutates `rotor`. A start outside `a` returns (start, 0).
WalkResult rotor_walk(const Region& a, const Point& start, RotorState& rotor, const RotorPolicy& policy);

/// Test hook: perturbs the rotor mechanics so that verification can be shown
/// to catch a broken engine.
struct EngineFault {
  /// Every k-th global step leaves the rotor where it was (the visit is still
  /// counted). 0 disables.
  std::uint64_t skip_increment_every = 0;
};

/// Rotor-router aggregate A_n together with its exact counters.
///
/// Sites are stored on a dense box around the origin that doubles when the
/// cluster approaches its edge; the box never leaks through the interface.
class AggState {
 public:
  explicit AggState(RotorPolicy policy, EngineFault fault = {});

  /// Rebuilds a state from its counters (snapshot restore). Throws
  /// std::runtime_error if the parts are inconsistent.
  static AggState restore(RotorPolicy policy, std::span<const Point> sites, std::uint64_t total_steps,
                          std::span<const std::pair<Point, std::uint64_t>> visits);

  const RotorPolicy& policy() const { return policy_; }
  int dim() const { return policy_.dim(); }

  std::uint64_t particles() const { return sites_.size(); }
  std::uint64_t total_steps() const { return total_steps_; }

  /// Occupied sites in the order they were adjoined; sites()[0] is the origin.
  const std::vector<Point>& sites() const { return sites_; }
  Region region() const;
  bool occupied(const Point& x) const;

  /// Routings from x so far (equals the rotor read count m_x).
  std::uint64_t odometer(const Point& x) const;
  /// Nonzero odometer entries, sorted by site.
  std::vector<std::pair<Point, std::uint64_t>> odometer_entries() const;
  RotorState rotor_state() const;

  /// Releases one particle from the origin; returns its step count.
  std::uint64_t add_particle();
  void run_to(std::uint64_t n);

  /// Throws std::runtime_error naming the first violated invariant.
  void check_invariants() const;

 private:
  void ensure_room(const Point& x);
  void rebuild(int radius);
  std::size_t origin_index() const;
  std::uint64_t walk_cyclic();
  std::uint64_t walk_generic();
  void adjoin(std::size_t idx);

  RotorPolicy policy_;
  EngineFault fault_;
  bool cyclic_;

  int radius_ = 0;
  BoxIndex box_;
  std::vector<std::uint8_t> occupied_;
  std::vector<std::uint8_t> rotor_pos_;
  std::vector<std::uint64_t> visits_;
  std::vector<std::int64_t> delta_;  // index offset for each position of the cyclic order

  std::vector<Point> sites_;
  std::uint64_t total_steps_ = 0;
};

/// State after n particles. When `resume` is given it must carry the same
/// policy and at most n particles; it is validated before continuing.
AggState aggregate(std::uint64_t n, const RotorPolicy& policy, std::optional<AggState> resume = std::nullopt);

/// Serial map-based aggregation built directly on rotor_walk. Kept as the
/// reference the dense engine is checked against.
AggState reference_aggregate(std::uint64_t n, const RotorPolicy& policy);

struct IdlaResult {
  Region region;
  std::vector<Point> sites;  // adjunction order
  std::uint64_t total_steps = 0;
};

/// Internal DLA with n particles, driven by a single stream keyed by `seed`.
IdlaResult idla(std::uint64_t n, int d, std::uint64_t seed);

struct Schedule {
  enum class Kind { FixedOrder, RandomSite, HighestLabel };
  Kind kind = Kind::FixedOrder;
  /// FixedOrder: sites fire in this priority order; unlisted sites come after,
  /// lexicographically.
  std::vector<Point> priority;
  std::uint64_t seed = 0;

  static Schedule fixed_order(std::vector<Point> priority = {}) { return {Kind::FixedOrder, std::move(priority), 0}; }
  static Schedule random_site(std::uint64_t seed) { return {Kind::RandomSite, {}, seed}; }
  static Schedule highest_label() { return {Kind::HighestLabel, {}, 0}; }
};

struct Mover {
  enum class Kind { Rotor, Random };
  Kind kind = Kind::Rotor;
  std::optional<RotorPolicy> policy;
  std::uint64_t seed = 0;

  static Mover rotor(RotorPolicy p) { return {Kind::Rotor, std::move(p), 0}; }
  static Mover random(std::uint64_t seed) { return {Kind::Random, std::nullopt, seed}; }
};

struct RelaxResult {
  Region final_sites;
  std::uint64_t steps = 0;
  /// Routings per site, sorted by site.
  std::vector<std::pair<Point, std::uint64_t>> odometer;
};

/// Moves one particle at a time from a multiply occupied site (chosen by the
/// schedule) until every site holds at most one particle.
RelaxResult df_relax(std::span<const Point> initial, const Schedule& schedule, const Mover& mover,
                     EngineFault fault = {});

}  // namespace rotorlab
