#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "rotorlab/lattice.hpp"

namespace rotorlab {

/// Raised when an explicit rotor stack is read past its end.
class InsufficientStack : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Initial rotor position as a function of the site. The value is an index
/// into the cyclic order: a rotor at position p reads order[p + 1] first.
struct OffsetRule {
  enum class Kind { Constant, Checkerboard, Hashed };
  Kind kind = Kind::Constant;
  int a = 0;  // constant value, or even-parity value for Checkerboard
  int b = 0;  // odd-parity value for Checkerboard
  std::uint64_t seed = 0;

  int operator()(const Point& x, int period) const;

  std::string str() const;
  static OffsetRule parse(const std::string& text);
  bool operator==(const OffsetRule&) const = default;
};

struct CyclicRule {
  std::vector<Direction> order;
  OffsetRule offset;
};

/// A finite stack per site: `prefix` (or the site's override) followed by
/// `cycle` repeated forever. An empty cycle makes the stack finite.
struct ExplicitRule {
  std::vector<Direction> prefix;
  std::vector<Direction> cycle;
  std::map<Point, std::vector<Direction>> sites;
};

/// Global rules given as a pure function of (x, m) with a stated period.
struct ScriptedRule {
  enum class Kind {
    Palindrome,  // order followed by reversed order, period 4d
    ParitySwap,  // order on even sites, reversed order on odd sites, period 2d
  };
  Kind kind = Kind::Palindrome;
  std::vector<Direction> order;

  int period(int d) const { return kind == Kind::Palindrome ? 4 * d : 2 * d; }
};

class RotorPolicy {
 public:
  using Rule = std::variant<CyclicRule, ExplicitRule, ScriptedRule>;

  RotorPolicy(int d, Rule rule);

  /// d = 2, order N, E, S, W with every rotor initially pointing North.
  static RotorPolicy nesw();
  /// Order +e_1, ..., +e_d, -e_1, ..., -e_d, all offsets zero.
  static RotorPolicy default_cyclic(int d);
  static std::vector<Direction> default_order(int d);

  int dim() const { return d_; }
  const Rule& rule() const { return rule_; }
  bool is_cyclic() const { return std::holds_alternative<CyclicRule>(rule_); }

  /// r_m at x, m >= 1.
  Direction direction(const Point& x, std::uint64_t m) const;

  /// Length after which the stack at x repeats with balanced counts, or 0 if
  /// it has no such period (explicit stacks with a prefix).
  int period_at(const Point& x) const;

  /// counts[k] = #{ i <= m : r_i = direction with index k }.
  std::array<std::uint64_t, 2 * kMaxDim> direction_counts(const Point& x, std::uint64_t m) const;

  /// Single-line descriptor, e.g. "cyclic order=+2,+1,-2,-1 offset=const:0".
  std::string descriptor() const;
  static RotorPolicy parse(const std::string& descriptor, int d);

 private:
  void validate() const;

  int d_;
  Rule rule_;
};

/// Per-site rotor read counters m_x.
struct RotorState {
  std::unordered_map<Point, std::uint64_t, PointHash> visits;

  std::uint64_t visits_at(const Point& x) const {
    auto it = visits.find(x);
    return it == visits.end() ? 0 : it->second;
  }
};

/// Increments m_x, then returns r_{m_x}.
Direction next_direction(RotorState& state, const RotorPolicy& policy, const Point& x);

/// max over directions e and m <= m_max of | #{i <= m : r_i = e} - m/(2d) |.
double discrepancy_audit(const RotorPolicy& policy, const Point& x, std::uint64_t m_max);

/// Largest audit value over the given (site, read count) pairs.
template <typename VisitRange>
double realized_discrepancy(const RotorPolicy& policy, const VisitRange& visits);

std::string format_directions(const std::vector<Direction>& dirs);
std::vector<Direction> parse_directions(const std::string& text, int d);

namespace detail {
double audit_periodic_or_direct(const RotorPolicy& policy, const Point& x, std::uint64_t m,
                                std::map<std::pair<int, std::uint64_t>, double>& memo);
}

template <typename VisitRange>
double realized_discrepancy(const RotorPolicy& policy, const VisitRange& visits) {
  std::map<std::pair<int, std::uint64_t>, double> memo;
  double worst = 0.0;
  for (const auto& [x, m] : visits) {
    if (m == 0) continue;
    const double v = detail::audit_periodic_or_direct(policy, x, static_cast<std::uint64_t>(m), memo);
    if (v > worst) worst = v;
  }
  return worst;
}

}  // namespace rotorlab
