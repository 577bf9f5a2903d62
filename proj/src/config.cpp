#include "rotorlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rotorlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_int(const std::string& key, const std::string& v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": '" + v + "'");
}

std::string real_str(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

const std::vector<std::string> kCommands = {"aggregate", "idla", "verify", "exit", "bruteforce-iso", "orthant", "shape-curve"};

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "command") command = v;
  else if (key == "d") d = parse_int<int>(key, v);
  else if (key == "n") n = parse_int<std::uint64_t>(key, v);
  else if (key == "checkpoints") checkpoints = v;
  else if (key == "policy") policy = v;
  else if (key == "seed") seed = parse_int<std::uint64_t>(key, v);
  else if (key == "tol") tol = parse_real(key, v);
  else if (key == "lebesgue_tol") lebesgue_tol = parse_real(key, v);
  else if (key == "trials") trials = parse_int<std::uint64_t>(key, v);
  else if (key == "k") k = parse_int<int>(key, v);
  else if (key == "r") r = parse_int<int>(key, v);
  else if (key == "ball") ball = parse_bool(key, v);
  else if (key == "exhaustive") exhaustive = parse_bool(key, v);
  else if (key == "region") region = v;
  else if (key == "csv") csv = v;
  else if (key == "render") render = v;
  else if (key == "snapshot") snapshot = v;
  else if (key == "snapshot_every") snapshot_every = parse_int<std::uint64_t>(key, v);
  else if (key == "resume") resume = v;
  else if (key == "fault_skip") fault_skip = parse_int<std::uint64_t>(key, v);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    c.set(trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  os << "command = " << command << '\n'
     << "d = " << d << '\n'
     << "n = " << n << '\n'
     << "checkpoints = " << checkpoints << '\n'
     << "policy = " << policy << '\n'
     << "seed = " << seed << '\n'
     << "tol = " << real_str(tol) << '\n'
     << "lebesgue_tol = " << real_str(lebesgue_tol) << '\n'
     << "trials = " << trials << '\n'
     << "k = " << k << '\n'
     << "r = " << r << '\n'
     << "ball = " << (ball ? "true" : "false") << '\n'
     << "exhaustive = " << (exhaustive ? "true" : "false") << '\n'
     << "region = " << region << '\n'
     << "csv = " << csv << '\n'
     << "render = " << render << '\n'
     << "snapshot = " << snapshot << '\n'
     << "snapshot_every = " << snapshot_every << '\n'
     << "resume = " << resume << '\n'
     << "fault_skip = " << fault_skip << '\n';
  return os.str();
}

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    throw std::invalid_argument("config: unknown command '" + command + "'");
  }
  if (d < 1 || d > 4) throw std::invalid_argument("config: d must be in 1..4");
  if (n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
  if (!(lebesgue_tol > 0.0)) throw std::invalid_argument("config: lebesgue_tol must be positive");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (k < 1) throw std::invalid_argument("config: k must be >= 1");
  if (r < 1) throw std::invalid_argument("config: r must be >= 1");
  if (!render.empty() && d != 2) throw std::invalid_argument("config: render needs d = 2");
  (void)checkpoint_list();
}

std::string RunConfig::resolved_policy() const {
  if (policy == "auto") return d == 2 ? "nesw" : "default";
  return policy;
}

std::vector<std::uint64_t> log_checkpoints(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (int j = 4;; ++j) {
    const auto c = static_cast<std::uint64_t>(std::llround(std::pow(10.0, j / 2.0)));
    if (c >= n) break;
    out.push_back(c);
  }
  out.push_back(n);
  return out;
}

std::vector<std::uint64_t> RunConfig::checkpoint_list() const {
  if (checkpoints == "log" || checkpoints.empty()) return log_checkpoints(n);
  std::vector<std::uint64_t> out;
  std::istringstream in(checkpoints);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto c = parse_int<std::uint64_t>("checkpoints", trim(item));
    if (c < 1 || c > n) throw std::invalid_argument("config: checkpoint " + std::to_string(c) + " outside 1..n");
    if (!out.empty() && c <= out.back()) throw std::invalid_argument("config: checkpoints must increase");
    out.push_back(c);
  }
  if (out.empty() || out.back() != n) out.push_back(n);
  return out;
}

}  // namespace rotorlab
