#include "rotorlab/rotors.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "rotorlab/rng.hpp"

namespace rotorlab {

namespace {

int floor_mod(std::int64_t a, int m) {
  const auto r = static_cast<int>(a % m);
  return r < 0 ? r + m : r;
}

int coord_sum(const Point& x) {
  std::int64_t s = 0;
  for (int i = 0; i < x.dim(); ++i) s += x[i];
  return static_cast<int>(s & 1);
}

void require_permutation(const std::vector<Direction>& order, int d, const char* what) {
  if (static_cast<int>(order.size()) != 2 * d) {
    throw std::invalid_argument(std::string(what) + ": order must list all 2d directions");
  }
  std::vector<int> seen(static_cast<std::size_t>(2 * d), 0);
  for (const auto& dir : order) {
    if (dir.axis < 0 || dir.axis >= d) throw std::invalid_argument(std::string(what) + ": axis out of range");
    if (seen[static_cast<std::size_t>(dir.index(d))]++) {
      throw std::invalid_argument(std::string(what) + ": order is not a permutation");
    }
  }
}

// Discrepancy of an explicit direction sequence over all prefixes m <= seq.size().
double audit_sequence(const std::vector<Direction>& seq, int d) {
  std::array<std::int64_t, 2 * kMaxDim> counts{};
  const int k = 2 * d;
  std::int64_t worst2d = 0;  // max | k * count - m |
  for (std::size_t i = 0; i < seq.size(); ++i) {
    ++counts[static_cast<std::size_t>(seq[i].index(d))];
    const auto m = static_cast<std::int64_t>(i + 1);
    for (int e = 0; e < k; ++e) worst2d = std::max(worst2d, std::abs(k * counts[e] - m));
  }
  return static_cast<double>(worst2d) / k;
}

}  // namespace

int OffsetRule::operator()(const Point& x, int period) const {
  switch (kind) {
    case Kind::Constant: return floor_mod(a, period);
    case Kind::Checkerboard: return floor_mod(coord_sum(x) ? b : a, period);
    case Kind::Hashed: {
      const std::uint64_t h = splitmix64(seed ^ static_cast<std::uint64_t>(PointHash{}(x)));
      return static_cast<int>(h % static_cast<std::uint64_t>(period));
    }
  }
  return 0;
}

std::string OffsetRule::str() const {
  switch (kind) {
    case Kind::Constant: return "const:" + std::to_string(a);
    case Kind::Checkerboard: return "checker:" + std::to_string(a) + "," + std::to_string(b);
    case Kind::Hashed: return "hash:" + std::to_string(seed);
  }
  return {};
}

OffsetRule OffsetRule::parse(const std::string& text) {
  OffsetRule r;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "const") {
      r.kind = Kind::Constant;
      r.a = arg.empty() ? 0 : std::stoi(arg);
    } else if (kind == "checker") {
      r.kind = Kind::Checkerboard;
      const auto comma = arg.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("checker offset needs two values");
      r.a = std::stoi(arg.substr(0, comma));
      r.b = std::stoi(arg.substr(comma + 1));
    } else if (kind == "hash") {
      r.kind = Kind::Hashed;
      r.seed = std::stoull(arg);
    } else {
      throw std::invalid_argument("unknown offset rule '" + text + "'");
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad offset rule '" + text + "'");
  }
  return r;
}

std::string format_directions(const std::vector<Direction>& dirs) {
  std::string out;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (i) out += ',';
    out += dirs[i].str();
  }
  return out;
}

std::vector<Direction> parse_directions(const std::string& text, int d) {
  std::vector<Direction> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    // A run like "+2*5" repeats a direction.
    const auto star = tok.find('*');
    if (star != std::string::npos) {
      const Direction dir = Direction::parse(tok.substr(0, star), d);
      const int reps = std::stoi(tok.substr(star + 1));
      if (reps < 0) throw std::invalid_argument("negative repeat count in '" + tok + "'");
      out.insert(out.end(), static_cast<std::size_t>(reps), dir);
    } else {
      out.push_back(Direction::parse(tok, d));
    }
  }
  return out;
}

RotorPolicy::RotorPolicy(int d, Rule rule) : d_(d), rule_(std::move(rule)) { validate(); }

void RotorPolicy::validate() const {
  if (d_ < 1 || d_ > kMaxDim) throw std::invalid_argument("policy dimension must be in [1, 4]");
  if (const auto* c = std::get_if<CyclicRule>(&rule_)) {
    require_permutation(c->order, d_, "cyclic policy");
  } else if (const auto* s = std::get_if<ScriptedRule>(&rule_)) {
    require_permutation(s->order, d_, "scripted policy");
  } else {
    const auto& e = std::get<ExplicitRule>(rule_);
    auto check = [&](const std::vector<Direction>& seq) {
      for (const auto& dir : seq) {
        if (dir.axis < 0 || dir.axis >= d_) throw std::invalid_argument("explicit policy: axis out of range");
      }
    };
    check(e.prefix);
    check(e.cycle);
    for (const auto& [x, seq] : e.sites) {
      if (x.dim() != d_) throw std::invalid_argument("explicit policy: site dimension mismatch");
      check(seq);
    }
  }
}

std::vector<Direction> RotorPolicy::default_order(int d) {
  std::vector<Direction> order;
  for (int k = 0; k < 2 * d; ++k) order.push_back(Direction::from_index(k, d));
  return order;
}

RotorPolicy RotorPolicy::nesw() {
  return RotorPolicy(2, CyclicRule{{{1, 1}, {0, 1}, {1, -1}, {0, -1}}, OffsetRule{}});
}

RotorPolicy RotorPolicy::default_cyclic(int d) { return RotorPolicy(d, CyclicRule{default_order(d), OffsetRule{}}); }

Direction RotorPolicy::direction(const Point& x, std::uint64_t m) const {
  const int k = 2 * d_;
  if (const auto* c = std::get_if<CyclicRule>(&rule_)) {
    const std::uint64_t pos = (static_cast<std::uint64_t>(c->offset(x, k)) + m) % static_cast<std::uint64_t>(k);
    return c->order[pos];
  }
  if (const auto* s = std::get_if<ScriptedRule>(&rule_)) {
    if (s->kind == ScriptedRule::Kind::Palindrome) {
      const auto pos = static_cast<int>((m - 1) % static_cast<std::uint64_t>(2 * k));
      return pos < k ? s->order[static_cast<std::size_t>(pos)] : s->order[static_cast<std::size_t>(2 * k - 1 - pos)];
    }
    const auto pos = static_cast<std::size_t>(m % static_cast<std::uint64_t>(k));
    return coord_sum(x) ? s->order[static_cast<std::size_t>(k - 1) - pos] : s->order[pos];
  }
  const auto& e = std::get<ExplicitRule>(rule_);
  auto it = e.sites.find(x);
  const auto& head = it == e.sites.end() ? e.prefix : it->second;
  if (m == 0) throw std::invalid_argument("rotor index m must be >= 1");
  if (m <= head.size()) return head[m - 1];
  if (e.cycle.empty()) {
    throw InsufficientStack("explicit rotor stack at " + x.str() + " has " + std::to_string(head.size()) +
                            " entries, read " + std::to_string(m) + " requested");
  }
  return e.cycle[(m - head.size() - 1) % e.cycle.size()];
}

int RotorPolicy::period_at(const Point& x) const {
  if (std::holds_alternative<CyclicRule>(rule_)) return 2 * d_;
  if (const auto* s = std::get_if<ScriptedRule>(&rule_)) return s->period(d_);
  const auto& e = std::get<ExplicitRule>(rule_);
  auto it = e.sites.find(x);
  const auto& head = it == e.sites.end() ? e.prefix : it->second;
  if (!head.empty() || e.cycle.empty()) return 0;
  // A pure cycle repeats; it only has balanced counts when every direction
  // appears equally often.
  std::array<int, 2 * kMaxDim> c{};
  for (const auto& dir : e.cycle) ++c[static_cast<std::size_t>(dir.index(d_))];
  for (int i = 1; i < 2 * d_; ++i) {
    if (c[i] != c[0]) return 0;
  }
  return static_cast<int>(e.cycle.size());
}

std::array<std::uint64_t, 2 * kMaxDim> RotorPolicy::direction_counts(const Point& x, std::uint64_t m) const {
  std::array<std::uint64_t, 2 * kMaxDim> counts{};
  const int period = period_at(x);
  std::uint64_t tail = m;
  if (period > 0) {
    const std::uint64_t full = m / static_cast<std::uint64_t>(period);
    const std::uint64_t per_dir = static_cast<std::uint64_t>(period) / static_cast<std::uint64_t>(2 * d_);
    for (int k = 0; k < 2 * d_; ++k) counts[k] = full * per_dir;
    tail = m % static_cast<std::uint64_t>(period);
  }
  const std::uint64_t start = m - tail;
  for (std::uint64_t i = start + 1; i <= m; ++i) ++counts[static_cast<std::size_t>(direction(x, i).index(d_))];
  return counts;
}

std::string RotorPolicy::descriptor() const {
  std::ostringstream os;
  if (const auto* c = std::get_if<CyclicRule>(&rule_)) {
    os << "cyclic order=" << format_directions(c->order) << " offset=" << c->offset.str();
  } else if (const auto* s = std::get_if<ScriptedRule>(&rule_)) {
    os << "scripted rule=" << (s->kind == ScriptedRule::Kind::Palindrome ? "palindrome" : "parity-swap")
       << " order=" << format_directions(s->order);
  } else {
    const auto& e = std::get<ExplicitRule>(rule_);
    os << "explicit prefix=" << format_directions(e.prefix) << " cycle=" << format_directions(e.cycle);
    for (const auto& [x, seq] : e.sites) {
      os << " site=";
      for (int i = 0; i < x.dim(); ++i) os << (i ? "," : "") << x[i];
      os << ':' << format_directions(seq);
    }
  }
  return os.str();
}

RotorPolicy RotorPolicy::parse(const std::string& descriptor, int d) {
  std::istringstream is(descriptor);
  std::string kind;
  is >> kind;
  if (kind == "nesw") {
    if (d != 2) throw std::invalid_argument("the nesw preset exists only in d = 2");
    return nesw();
  }
  if (kind == "default" || kind == "default-cyclic") return default_cyclic(d);

  std::map<std::string, std::string> kv;
  std::vector<std::string> site_specs;
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("policy token without '=': " + tok);
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "site") {
      site_specs.push_back(val);
    } else {
      kv[key] = val;
    }
  }
  auto take = [&](const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    std::string v = it == kv.end() ? fallback : it->second;
    if (it != kv.end()) kv.erase(it);
    return v;
  };
  auto reject_rest = [&]() {
    if (!kv.empty()) throw std::invalid_argument("unknown policy key '" + kv.begin()->first + "'");
  };

  if (kind == "cyclic") {
    const std::string order = take("order", "");
    CyclicRule rule{order.empty() ? default_order(d) : parse_directions(order, d),
                    OffsetRule::parse(take("offset", "const:0"))};
    reject_rest();
    return RotorPolicy(d, std::move(rule));
  }
  if (kind == "scripted") {
    const std::string name = take("rule", "palindrome");
    const std::string order = take("order", "");
    ScriptedRule rule;
    if (name == "palindrome") {
      rule.kind = ScriptedRule::Kind::Palindrome;
    } else if (name == "parity-swap") {
      rule.kind = ScriptedRule::Kind::ParitySwap;
    } else {
      throw std::invalid_argument("unknown scripted rule '" + name + "'");
    }
    rule.order = order.empty() ? default_order(d) : parse_directions(order, d);
    reject_rest();
    return RotorPolicy(d, std::move(rule));
  }
  if (kind == "explicit") {
    ExplicitRule rule;
    rule.prefix = parse_directions(take("prefix", ""), d);
    rule.cycle = parse_directions(take("cycle", ""), d);
    for (const auto& entry : site_specs) {
      const auto colon = entry.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("site override needs 'coords:dirs': " + entry);
      Point x(d);
      std::stringstream cs(entry.substr(0, colon));
      std::string c;
      int i = 0;
      while (std::getline(cs, c, ',')) {
        if (i >= d) throw std::invalid_argument("site override has too many coordinates: " + entry);
        x[i++] = std::stoi(c);
      }
      if (i != d) throw std::invalid_argument("site override has too few coordinates: " + entry);
      rule.sites[x] = parse_directions(entry.substr(colon + 1), d);
    }
    reject_rest();
    return RotorPolicy(d, std::move(rule));
  }
  throw std::invalid_argument("unknown policy kind '" + kind + "'");
}

Direction next_direction(RotorState& state, const RotorPolicy& policy, const Point& x) {
  const std::uint64_t m = ++state.visits[x];
  return policy.direction(x, m);
}

double discrepancy_audit(const RotorPolicy& policy, const Point& x, std::uint64_t m_max) {
  if (m_max < 1) throw std::invalid_argument("discrepancy_audit: m_max must be >= 1");
  std::vector<Direction> seq;
  seq.reserve(static_cast<std::size_t>(m_max));
  for (std::uint64_t m = 1; m <= m_max; ++m) seq.push_back(policy.direction(x, m));
  return audit_sequence(seq, policy.dim());
}

namespace detail {

double audit_periodic_or_direct(const RotorPolicy& policy, const Point& x, std::uint64_t m,
                                std::map<std::pair<int, std::uint64_t>, double>& memo) {
  const int period = policy.period_at(x);
  if (period == 0) return discrepancy_audit(policy, x, m);
  // Counts are balanced after every full period, so prefixes beyond one
  // period repeat earlier deviations.
  const std::uint64_t capped = std::min<std::uint64_t>(m, static_cast<std::uint64_t>(period));
  int cls = 0;
  const auto& rule = policy.rule();
  if (const auto* c = std::get_if<CyclicRule>(&rule)) {
    cls = c->offset(x, 2 * policy.dim());
  } else if (const auto* s = std::get_if<ScriptedRule>(&rule)) {
    cls = s->kind == ScriptedRule::Kind::ParitySwap ? coord_sum(x) : 0;
  } else {
    cls = -1;  // pure explicit cycle: the same for every site
  }
  const auto key = std::make_pair(cls, capped);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  const double v = discrepancy_audit(policy, x, capped);
  memo.emplace(key, v);
  return v;
}

}  // namespace detail

}  // namespace rotorlab
