#include "rotorlab/engine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "rotorlab/rng.hpp"

namespace rotorlab {

namespace {

constexpr int kInitialRadius = 8;

// Sanity bound on a single walk; a real walk on a finite region is far
// shorter, so exceeding it means the rotor mechanics are broken.
std::uint64_t walk_watchdog(int d, std::size_t sites, std::int64_t diameter) {
  const auto span = static_cast<std::uint64_t>(diameter + 2);
  return 16ULL * static_cast<std::uint64_t>(2 * d) * (sites + 1) * span * span + 1024;
}

bool fault_hits(const EngineFault& fault, std::uint64_t global_step) {
  return fault.skip_increment_every != 0 && global_step % fault.skip_increment_every == 0;
}

}  // namespace

WalkResult rotor_walk(const Region& a, const Point& start, RotorState& rotor, const RotorPolicy& policy) {
  if (!a.contains(start)) return {start, 0};
  std::int64_t diameter = 0;
  for (int i = 0; i < a.dim(); ++i) diameter += a.hi()[i] - a.lo()[i];
  const std::uint64_t cap = walk_watchdog(a.dim(), a.size(), diameter);
  Point x = start;
  std::uint64_t steps = 0;
  while (a.contains(x)) {
    x = step(x, next_direction(rotor, policy, x));
    if (++steps > cap) throw std::logic_error("rotor_walk exceeded its step watchdog");
  }
  return {x, steps};
}

// ---------------------------------------------------------------------------

AggState::AggState(RotorPolicy policy, EngineFault fault)
    : policy_(std::move(policy)), fault_(fault), cyclic_(policy_.is_cyclic()) {
  rebuild(kInitialRadius);
}

void AggState::rebuild(int radius) {
  const int d = dim();
  Point lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = -radius;
    hi[i] = radius;
  }
  BoxIndex box(lo, hi);
  std::vector<std::uint8_t> occ(box.size(), 0);
  std::vector<std::uint64_t> visits(box.size(), 0);
  std::vector<std::uint8_t> pos(cyclic_ ? box.size() : 0, 0);

  const int k = 2 * d;
  const bool had_box = radius_ > 0;
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    const Point x = box.point(idx);
    if (had_box && box_.inside(x)) {
      const std::size_t old = box_.index(x);
      occ[idx] = occupied_[old];
      visits[idx] = visits_[old];
      if (cyclic_) pos[idx] = rotor_pos_[old];
    } else if (cyclic_) {
      pos[idx] = static_cast<std::uint8_t>(std::get<CyclicRule>(policy_.rule()).offset(x, k));
    }
  }
  radius_ = radius;
  box_ = box;
  occupied_ = std::move(occ);
  visits_ = std::move(visits);
  rotor_pos_ = std::move(pos);

  delta_.clear();
  if (cyclic_) {
    for (const auto& dir : std::get<CyclicRule>(policy_.rule()).order) {
      delta_.push_back(dir.sign * box_.stride(dir.axis));
    }
  }
}

void AggState::ensure_room(const Point& x) {
  if (x.norm_inf() <= radius_ - 2) return;
  int r = radius_;
  while (x.norm_inf() > r - 2) r *= 2;
  rebuild(r);
}

std::size_t AggState::origin_index() const { return box_.index(Point::origin(dim())); }

void AggState::adjoin(std::size_t idx) {
  occupied_[idx] = 1;
  const Point x = box_.point(idx);
  sites_.push_back(x);
  ensure_room(x);
}

std::uint64_t AggState::walk_cyclic() {
  const int k = 2 * dim();
  const std::uint64_t cap = walk_watchdog(dim(), sites_.size(), 4LL * radius_);
  std::size_t idx = origin_index();
  std::uint64_t steps = 0;
  while (occupied_[idx]) {
    std::uint8_t p = rotor_pos_[idx];
    if (!fault_hits(fault_, total_steps_ + steps + 1)) {
      p = static_cast<std::uint8_t>(p + 1 == k ? 0 : p + 1);
      rotor_pos_[idx] = p;
    }
    ++visits_[idx];
    idx = static_cast<std::size_t>(static_cast<std::int64_t>(idx) + delta_[p]);
    if (++steps > cap) throw std::logic_error("aggregate walk exceeded its step watchdog");
  }
  adjoin(idx);
  return steps;
}

std::uint64_t AggState::walk_generic() {
  const std::uint64_t cap = walk_watchdog(dim(), sites_.size(), 4LL * radius_);
  Point x = Point::origin(dim());
  std::size_t idx = origin_index();
  std::uint64_t steps = 0;
  while (occupied_[idx]) {
    const std::uint64_t m = ++visits_[idx];
    const std::uint64_t read = (m > 1 && fault_hits(fault_, total_steps_ + steps + 1)) ? m - 1 : m;
    const Direction dir = policy_.direction(x, read);
    x = step(x, dir);
    idx = static_cast<std::size_t>(static_cast<std::int64_t>(idx) + dir.sign * box_.stride(dir.axis));
    if (++steps > cap) throw std::logic_error("aggregate walk exceeded its step watchdog");
  }
  adjoin(idx);
  return steps;
}

std::uint64_t AggState::add_particle() {
  const std::uint64_t steps = cyclic_ ? walk_cyclic() : walk_generic();
  total_steps_ += steps;
  return steps;
}

void AggState::run_to(std::uint64_t n) {
  while (particles() < n) add_particle();
}

Region AggState::region() const { return Region(dim(), sites_); }

bool AggState::occupied(const Point& x) const { return box_.inside(x) && occupied_[box_.index(x)] != 0; }

std::uint64_t AggState::odometer(const Point& x) const { return box_.inside(x) ? visits_[box_.index(x)] : 0; }

std::vector<std::pair<Point, std::uint64_t>> AggState::odometer_entries() const {
  std::vector<std::pair<Point, std::uint64_t>> out;
  for (const auto& x : sites_) {
    const std::uint64_t v = visits_[box_.index(x)];
    if (v) out.emplace_back(x, v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

RotorState AggState::rotor_state() const {
  RotorState s;
  for (const auto& [x, v] : odometer_entries()) s.visits[x] = v;
  return s;
}

void AggState::check_invariants() const {
  if (sites_.empty()) {
    if (total_steps_ != 0) throw std::runtime_error("empty aggregate with nonzero step count");
    return;
  }
  if (!sites_.front().is_origin()) throw std::runtime_error("first adjoined site is not the origin");
  std::size_t occupied_count = 0;
  std::uint64_t visit_sum = 0;
  for (std::size_t idx = 0; idx < box_.size(); ++idx) {
    occupied_count += occupied_[idx];
    visit_sum += visits_[idx];
    if (visits_[idx] && !occupied_[idx]) throw std::runtime_error("routings recorded at an unoccupied site");
  }
  if (occupied_count != sites_.size()) throw std::runtime_error("particle count does not match occupied sites");
  if (visit_sum != total_steps_) throw std::runtime_error("odometer sum does not match total steps");

  // Connectivity by flood fill from the origin.
  std::vector<std::uint8_t> seen(box_.size(), 0);
  std::deque<std::size_t> queue{origin_index()};
  seen[origin_index()] = 1;
  std::size_t reached = 0;
  while (!queue.empty()) {
    const std::size_t idx = queue.front();
    queue.pop_front();
    ++reached;
    for (int i = 0; i < dim(); ++i) {
      for (int s : {-1, 1}) {
        const auto j = static_cast<std::size_t>(static_cast<std::int64_t>(idx) + s * box_.stride(i));
        if (j < box_.size() && occupied_[j] && !seen[j]) {
          seen[j] = 1;
          queue.push_back(j);
        }
      }
    }
  }
  if (reached != sites_.size()) throw std::runtime_error("aggregate is not connected");
}

AggState AggState::restore(RotorPolicy policy, std::span<const Point> sites, std::uint64_t total_steps,
                           std::span<const std::pair<Point, std::uint64_t>> visits) {
  AggState s(std::move(policy));
  const int d = s.dim();
  for (const auto& x : sites) {
    if (x.dim() != d) throw std::runtime_error("restored site has the wrong dimension");
    s.ensure_room(x);
    const std::size_t idx = s.box_.index(x);
    if (s.occupied_[idx]) throw std::runtime_error("restored sites contain a duplicate");
    s.occupied_[idx] = 1;
    s.sites_.push_back(x);
  }
  for (const auto& [x, v] : visits) {
    if (x.dim() != d || !s.occupied(x)) throw std::runtime_error("restored visit count at an unoccupied site");
    s.visits_[s.box_.index(x)] = v;
  }
  if (s.cyclic_) {
    const auto& rule = std::get<CyclicRule>(s.policy_.rule());
    const int k = 2 * d;
    for (std::size_t idx = 0; idx < s.box_.size(); ++idx) {
      const Point x = s.box_.point(idx);
      s.rotor_pos_[idx] = static_cast<std::uint8_t>((rule.offset(x, k) + s.visits_[idx]) % static_cast<std::uint64_t>(k));
    }
  }
  s.total_steps_ = total_steps;
  s.check_invariants();
  return s;
}

AggState aggregate(std::uint64_t n, const RotorPolicy& policy, std::optional<AggState> resume) {
  if (n < 1) throw std::invalid_argument("aggregate: n must be >= 1");
  if (resume) {
    if (resume->policy().descriptor() != policy.descriptor() || resume->dim() != policy.dim()) {
      throw std::runtime_error("resume state was produced by a different rotor policy");
    }
    if (resume->particles() > n) throw std::runtime_error("resume state already holds more than n particles");
    resume->check_invariants();
    resume->run_to(n);
    return std::move(*resume);
  }
  AggState s(policy);
  s.run_to(n);
  return s;
}

AggState reference_aggregate(std::uint64_t n, const RotorPolicy& policy) {
  const int d = policy.dim();
  Region a(d);
  RotorState rotor;
  std::vector<Point> sites;
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const WalkResult w = rotor_walk(a, Point::origin(d), rotor, policy);
    a.insert(w.exit);
    sites.push_back(w.exit);
    total += w.steps;
  }
  std::vector<std::pair<Point, std::uint64_t>> visits(rotor.visits.begin(), rotor.visits.end());
  return AggState::restore(policy, sites, total, visits);
}

// ---------------------------------------------------------------------------

namespace {

// Occupancy on a box around the origin, doubled on demand.
class GrowingMask {
 public:
  explicit GrowingMask(int d) : d_(d) { rebuild(kInitialRadius); }

  std::size_t index(const Point& x) const { return box_.index(x); }
  bool occupied(std::size_t idx) const { return occ_[idx] != 0; }
  std::int64_t stride(int axis) const { return box_.stride(axis); }

  void set(const Point& x) {
    occ_[box_.index(x)] = 1;
    if (x.norm_inf() > radius_ - 2) {
      int r = radius_;
      while (x.norm_inf() > r - 2) r *= 2;
      rebuild(r);
    }
  }

  Point point(std::size_t idx) const { return box_.point(idx); }

 private:
  void rebuild(int radius) {
    Point lo(d_), hi(d_);
    for (int i = 0; i < d_; ++i) {
      lo[i] = -radius;
      hi[i] = radius;
    }
    BoxIndex box(lo, hi);
    std::vector<std::uint8_t> occ(box.size(), 0);
    if (radius_ > 0) {
      for (std::size_t idx = 0; idx < box_.size(); ++idx) {
        if (occ_[idx]) occ[box.index(box_.point(idx))] = 1;
      }
    }
    radius_ = radius;
    box_ = box;
    occ_ = std::move(occ);
  }

  int d_;
  int radius_ = 0;
  BoxIndex box_;
  std::vector<std::uint8_t> occ_;
};

}  // namespace

IdlaResult idla(std::uint64_t n, int d, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("idla: n must be >= 1");
  GrowingMask mask(d);
  Stream rng(seed);
  IdlaResult out{Region(d), {}, 0};
  const Point o = Point::origin(d);
  std::vector<std::int64_t> delta(static_cast<std::size_t>(2 * d));
  auto refresh_delta = [&]() {
    for (int k = 0; k < 2 * d; ++k) {
      const Direction dir = Direction::from_index(k, d);
      delta[static_cast<std::size_t>(k)] = dir.sign * mask.stride(dir.axis);
    }
  };
  refresh_delta();
  for (std::uint64_t i = 0; i < n; ++i) {
    std::size_t idx = mask.index(o);
    while (mask.occupied(idx)) {
      idx = static_cast<std::size_t>(static_cast<std::int64_t>(idx) + delta[rng.below(static_cast<std::uint32_t>(2 * d))]);
      ++out.total_steps;
    }
    const Point x = mask.point(idx);
    mask.set(x);
    refresh_delta();
    out.sites.push_back(x);
    out.region.insert(x);
  }
  return out;
}

// ---------------------------------------------------------------------------

RelaxResult df_relax(std::span<const Point> initial, const Schedule& schedule, const Mover& mover,
                     EngineFault fault) {
  RelaxResult out;
  if (initial.empty()) return out;
  const int d = initial.front().dim();
  out.final_sites = Region(d);
  if (mover.kind == Mover::Kind::Rotor && (!mover.policy || mover.policy->dim() != d)) {
    throw std::invalid_argument("df_relax: rotor mover needs a policy of matching dimension");
  }

  std::unordered_map<Point, std::vector<std::uint32_t>, PointHash> at;
  std::vector<Point> where(initial.size());
  for (std::size_t i = 0; i < initial.size(); ++i) {
    where[i] = initial[i];
    at[initial[i]].push_back(static_cast<std::uint32_t>(i));
  }

  // Multiply occupied sites, in the structure the schedule needs.
  std::map<Point, std::size_t> rank;
  for (std::size_t i = 0; i < schedule.priority.size(); ++i) rank.emplace(schedule.priority[i], i);
  std::set<std::pair<std::size_t, Point>> ordered;
  std::vector<Point> hot_list;
  std::unordered_map<Point, std::size_t, PointHash> hot_pos;
  std::priority_queue<std::pair<std::uint32_t, Point>> by_label;

  auto rank_of = [&](const Point& x) {
    auto it = rank.find(x);
    return it == rank.end() ? schedule.priority.size() : it->second;
  };
  auto mark_hot = [&](const Point& x) {
    switch (schedule.kind) {
      case Schedule::Kind::FixedOrder: ordered.emplace(rank_of(x), x); break;
      case Schedule::Kind::RandomSite:
        if (!hot_pos.count(x)) {
          hot_pos[x] = hot_list.size();
          hot_list.push_back(x);
        }
        break;
      case Schedule::Kind::HighestLabel:
        for (auto label : at[x]) by_label.emplace(label, x);
        break;
    }
  };
  auto unmark_hot = [&](const Point& x) {
    switch (schedule.kind) {
      case Schedule::Kind::FixedOrder: ordered.erase({rank_of(x), x}); break;
      case Schedule::Kind::RandomSite: {
        auto it = hot_pos.find(x);
        if (it == hot_pos.end()) break;
        const std::size_t i = it->second;
        hot_list[i] = hot_list.back();
        hot_pos[hot_list[i]] = i;
        hot_list.pop_back();
        hot_pos.erase(x);
        break;
      }
      case Schedule::Kind::HighestLabel: break;  // stale heap entries are skipped lazily
    }
  };
  for (const auto& [x, labels] : at) {
    if (labels.size() >= 2) mark_hot(x);
  }

  Stream sched_rng(schedule.seed, 1);
  Stream move_rng(mover.seed, 2);
  RotorState rotor;
  std::unordered_map<Point, std::uint64_t, PointHash> odometer;

  while (true) {
    Point site(d);
    std::uint32_t label = 0;
    if (schedule.kind == Schedule::Kind::FixedOrder) {
      if (ordered.empty()) break;
      site = ordered.begin()->second;
      label = at[site].back();
    } else if (schedule.kind == Schedule::Kind::RandomSite) {
      if (hot_list.empty()) break;
      site = hot_list[sched_rng.below(static_cast<std::uint32_t>(hot_list.size()))];
      label = at[site].back();
    } else {
      bool found = false;
      while (!by_label.empty()) {
        const auto [l, x] = by_label.top();
        by_label.pop();
        if (where[l] == x && at[x].size() >= 2) {
          site = x;
          label = l;
          found = true;
          break;
        }
      }
      if (!found) break;
    }

    auto& here = at[site];
    here.erase(std::find(here.begin(), here.end(), label));
    if (here.size() < 2) unmark_hot(site);

    Direction dir;
    if (mover.kind == Mover::Kind::Rotor) {
      const std::uint64_t m = ++rotor.visits[site];
      const std::uint64_t read = (m > 1 && fault_hits(fault, out.steps + 1)) ? m - 1 : m;
      dir = mover.policy->direction(site, read);
    } else {
      dir = Direction::from_index(static_cast<int>(move_rng.below(static_cast<std::uint32_t>(2 * d))), d);
    }
    ++odometer[site];
    ++out.steps;

    const Point target = step(site, dir);
    where[label] = target;
    auto& there = at[target];
    there.push_back(label);
    if (there.size() == 2) {
      mark_hot(target);
    } else if (there.size() > 2 && schedule.kind == Schedule::Kind::HighestLabel) {
      by_label.emplace(label, target);
    }
  }

  for (const auto& [x, labels] : at) {
    if (!labels.empty()) out.final_sites.insert(x);
  }
  out.odometer.assign(odometer.begin(), odometer.end());
  std::sort(out.odometer.begin(), out.odometer.end());
  return out;
}

}  // namespace rotorlab
